/* Copyright (c) 2026 The VocabForge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#include "vocabforge/affine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "vocabforge/error.hpp"
#include "vocabforge/io.hpp"
#include "vocabforge/random.hpp"

namespace vocabforge {

namespace {

// Parameters are kept float-representable so EMB1 storage is lossless.
double ToFloat(double v) { return static_cast<double>(static_cast<float>(v)); }

Eigen::MatrixXd RoundToFloat(const Eigen::MatrixXd& m) {
  return m.cast<float>().cast<double>();
}

Eigen::MatrixXd L2NormalizeRows(Eigen::MatrixXd z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    double norm = z.row(i).norm();
    if (norm > 0.0) z.row(i) /= norm;
  }
  return z;
}

Eigen::MatrixXd InputFeatures(const AffineMap& map, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd z = map.input_scaler.Forward(x);
  return map.l2_normalize_inputs ? L2NormalizeRows(std::move(z)) : z;
}

void RequirePairs(const PairSet& pairs) {
  if (pairs.x.rows() != pairs.y.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "pair set has mismatched row counts");
  }
  if (pairs.size() < 2) {
    throw Error(ErrorCode::kPrecondition, "fitting needs at least 2 pairs, got " +
                                              std::to_string(pairs.size()));
  }
}

// Scalers fitted and features built once; shared by both fitting routes.
struct ScaledProblem {
  AffineMap shell;
  Eigen::MatrixXd z;  // N x m
  Eigen::MatrixXd t;  // N x n
};

ScaledProblem Prepare(const PairSet& pairs, bool l2_normalize) {
  RequirePairs(pairs);
  ScaledProblem p;
  p.shell.input_scaler = Scaler::Fit(pairs.x);
  p.shell.output_scaler = Scaler::Fit(pairs.y);
  p.shell.l2_normalize_inputs = l2_normalize;
  p.z = InputFeatures(p.shell, pairs.x);
  p.t = p.shell.output_scaler.Forward(pairs.y);
  return p;
}

double ResidualMse(const Eigen::MatrixXd& z, const Eigen::MatrixXd& t, const Eigen::MatrixXd& w,
                   const Eigen::VectorXd& b) {
  Eigen::MatrixXd r = (z * w.transpose()).rowwise() + b.transpose();
  r -= t;
  return r.squaredNorm() / static_cast<double>(r.size());
}

}  // namespace

// ------------------------------------------------------------------ Scaler

Scaler Scaler::Fit(const Eigen::MatrixXd& rows) {
  Scaler s;
  const auto n = static_cast<double>(rows.rows());
  s.mean = rows.colwise().mean().transpose();
  s.std.resize(rows.cols());
  for (Eigen::Index k = 0; k < rows.cols(); ++k) {
    double var = (rows.col(k).array() - s.mean(k)).square().sum() / n;
    double sd = std::sqrt(var);
    s.mean(k) = ToFloat(s.mean(k));
    if (!(sd > 1e-12) || !std::isfinite(sd)) {
      s.std(k) = 1.0;
      s.degenerate.push_back(static_cast<std::size_t>(k));
    } else {
      s.std(k) = ToFloat(sd);
    }
  }
  return s;
}

Scaler Scaler::Identity(std::size_t dim) {
  Scaler s;
  s.mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  s.std = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim));
  return s;
}

Eigen::MatrixXd Scaler::Forward(const Eigen::MatrixXd& rows) const {
  return (rows.rowwise() - mean.transpose()).array().rowwise() / std.transpose().array();
}

Eigen::MatrixXd Scaler::Inverse(const Eigen::MatrixXd& rows) const {
  return (rows.array().rowwise() * std.transpose().array()).matrix().rowwise() +
         mean.transpose();
}

AffineMap AffineMap::Identity(std::size_t dim) {
  AffineMap map;
  map.weight = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim),
                                         static_cast<Eigen::Index>(dim));
  map.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  map.input_scaler = Scaler::Identity(dim);
  map.output_scaler = Scaler::Identity(dim);
  return map;
}

// ------------------------------------------------------------------- Pairs

PairSet CollectPairs(const EmbeddingMatrix& helper, const EmbeddingMatrix& source,
                     const TokenPartition& partition, std::optional<std::size_t> limit,
                     std::uint64_t seed) {
  if (partition.shared.empty()) {
    throw Error(ErrorCode::kEmptyIntersection, "no shared tokens to train the mapping on");
  }
  std::vector<std::size_t> chosen(partition.shared.size());
  std::iota(chosen.begin(), chosen.end(), 0);
  if (limit && *limit < chosen.size()) {
    SeededStream rng(seed);
    // Partial Fisher-Yates, then restore partition order.
    for (std::size_t i = 0; i < *limit; ++i) {
      std::size_t j = i + rng.Below(chosen.size() - i);
      std::swap(chosen[i], chosen[j]);
    }
    chosen.resize(*limit);
    std::sort(chosen.begin(), chosen.end());
  }

  PairSet pairs;
  const auto count = static_cast<Eigen::Index>(chosen.size());
  pairs.x.resize(count, static_cast<Eigen::Index>(helper.dim()));
  pairs.y.resize(count, static_cast<Eigen::Index>(source.dim()));
  pairs.target_ids.reserve(chosen.size());
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto& tok = partition.shared[chosen[i]];
    if (tok.target_id >= helper.rows() || tok.source_id >= source.rows()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "shared token '" + tok.piece + "' has no row in the helper or source matrix");
    }
    auto h = helper.Row(tok.target_id);
    auto s = source.Row(tok.source_id);
    for (std::size_t k = 0; k < h.size(); ++k) pairs.x(i, static_cast<Eigen::Index>(k)) = h[k];
    for (std::size_t k = 0; k < s.size(); ++k) pairs.y(i, static_cast<Eigen::Index>(k)) = s[k];
    pairs.target_ids.push_back(tok.target_id);
  }
  return pairs;
}

// ----------------------------------------------------------------- Fitting

std::pair<AffineMap, FitReport> FitGradient(const PairSet& pairs, const TrainConfig& config) {
  if (config.steps < 1 || !(config.learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "steps must be >= 1 and learning rate > 0");
  }
  ScaledProblem problem = Prepare(pairs, config.l2_normalize_inputs);
  const Eigen::MatrixXd& z = problem.z;
  const Eigen::MatrixXd& t = problem.t;
  const Eigen::Index m = z.cols();
  const Eigen::Index n = t.cols();
  const double count = static_cast<double>(z.rows());
  const double scale = 2.0 / (count * static_cast<double>(n));

  // Sufficient statistics: the loss and its gradient only touch these, so a
  // step costs O(n m^2) regardless of the pair count.
  const Eigen::MatrixXd gram = z.transpose() * z;   // m x m
  const Eigen::MatrixXd cross = t.transpose() * z;  // n x m
  const Eigen::VectorXd z_sum = z.colwise().sum().transpose();
  const Eigen::VectorXd t_sum = t.colwise().sum().transpose();
  const double t_sq = t.squaredNorm();

  Eigen::MatrixXd w(n, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  SeededStream init(config.seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<Eigen::Index>(m, 1)));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) w(i, j) = (2.0 * init.Uniform01() - 1.0) * bound;
  }

  auto gram_loss = [&](const Eigen::MatrixXd& wm, const Eigen::VectorXd& bv) {
    double quad = (wm * gram).cwiseProduct(wm).sum();
    double lin = 2.0 * bv.dot(wm * z_sum) + count * bv.squaredNorm();
    double cr = 2.0 * wm.cwiseProduct(cross).sum() + 2.0 * bv.dot(t_sum);
    return std::max(0.0, (quad + lin - cr + t_sq) / (count * static_cast<double>(n)));
  };

  FitReport report;
  report.pair_count = pairs.size();
  report.initial_mse = ResidualMse(z, t, w, b);
  report.loss_curve.reserve(static_cast<std::size_t>(config.steps));

  Eigen::MatrixXd m_w = Eigen::MatrixXd::Zero(n, m), v_w = Eigen::MatrixXd::Zero(n, m);
  Eigen::VectorXd m_b = Eigen::VectorXd::Zero(n), v_b = Eigen::VectorXd::Zero(n);
  double beta1_pow = 1.0, beta2_pow = 1.0;
  for (int step = 1; step <= config.steps; ++step) {
    double loss = gram_loss(w, b);
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kNonFiniteLoss, "loss diverged at step " + std::to_string(step));
    }
    report.loss_curve.push_back(loss);

    Eigen::MatrixXd grad_w = scale * (w * gram + b * z_sum.transpose() - cross);
    Eigen::VectorXd grad_b = scale * (w * z_sum + count * b - t_sum);

    beta1_pow *= config.beta1;
    beta2_pow *= config.beta2;
    const double c1 = 1.0 - beta1_pow;
    const double c2 = 1.0 - beta2_pow;
    m_w = config.beta1 * m_w + (1.0 - config.beta1) * grad_w;
    v_w = config.beta2 * v_w + (1.0 - config.beta2) * grad_w.cwiseAbs2();
    m_b = config.beta1 * m_b + (1.0 - config.beta1) * grad_b;
    v_b = config.beta2 * v_b + (1.0 - config.beta2) * grad_b.cwiseAbs2();
    w.array() -= config.learning_rate * (m_w.array() / c1) /
                 ((v_w.array() / c2).sqrt() + config.epsilon);
    b.array() -= config.learning_rate * (m_b.array() / c1) /
                 ((v_b.array() / c2).sqrt() + config.epsilon);
  }

  AffineMap map = std::move(problem.shell);
  map.weight = RoundToFloat(w);
  map.bias = RoundToFloat(b);
  report.final_mse = ResidualMse(z, t, map.weight, map.bias);
  if (!std::isfinite(report.final_mse)) {
    throw Error(ErrorCode::kNonFiniteLoss, "final loss is not finite");
  }
  report.loss_increased = report.final_mse > report.initial_mse;

  if (config.compute_oracle) {
    AffineMap oracle = FitClosedForm(pairs, config.ridge_lambda, config.l2_normalize_inputs);
    report.oracle_mse = ScaledMse(oracle, pairs);
    Eigen::MatrixXd ours = ApplyMapRows(map, pairs.x);
    Eigen::MatrixXd best = ApplyMapRows(oracle, pairs.x);
    double denom = best.norm();
    report.frobenius_gap_to_oracle = (ours - best).norm() / (denom > 0.0 ? denom : 1.0);
  }
  return {std::move(map), std::move(report)};
}

AffineMap FitClosedForm(const PairSet& pairs, double ridge_lambda, bool l2_normalize_inputs) {
  if (ridge_lambda < 0.0) throw Error(ErrorCode::kInvalidArgument, "ridge lambda must be >= 0");
  ScaledProblem problem = Prepare(pairs, l2_normalize_inputs);
  const Eigen::Index m = problem.z.cols();
  const Eigen::Index rows = problem.z.rows();

  Eigen::MatrixXd design(rows, m + 1);
  design.leftCols(m) = problem.z;
  design.col(m).setOnes();
  Eigen::MatrixXd normal = design.transpose() * design;
  normal.diagonal().head(m).array() += ridge_lambda;
  Eigen::MatrixXd rhs = design.transpose() * problem.t;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(normal);
  if (qr.rank() < normal.rows()) {
    throw Error(ErrorCode::kSingularSystem,
                "normal equations are rank deficient (rank " + std::to_string(qr.rank()) +
                    " of " + std::to_string(normal.rows()) + "); use a positive ridge lambda");
  }
  Eigen::MatrixXd coef = qr.solve(rhs);  // (m+1) x n

  AffineMap map = std::move(problem.shell);
  map.weight = RoundToFloat(coef.topRows(m).transpose());
  map.bias = RoundToFloat(coef.row(m).transpose());
  return map;
}

double ScaledMse(const AffineMap& map, const PairSet& pairs) {
  RequirePairs(pairs);
  return ResidualMse(InputFeatures(map, pairs.x), map.output_scaler.Forward(pairs.y), map.weight,
                     map.bias);
}

// -------------------------------------------------------------- Applying

Eigen::MatrixXd ApplyMapRows(const AffineMap& map, const Eigen::MatrixXd& x) {
  if (static_cast<std::size_t>(x.cols()) != map.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "map expects inputs of dim " + std::to_string(map.input_dim()) + ", got " +
                    std::to_string(x.cols()));
  }
  Eigen::MatrixXd y = (InputFeatures(map, x) * map.weight.transpose()).rowwise() +
                      map.bias.transpose();
  return map.output_scaler.Inverse(y);
}

std::vector<float> ApplyMap(const AffineMap& map, std::span<const float> x) {
  Eigen::MatrixXd row(1, static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k) row(0, static_cast<Eigen::Index>(k)) = x[k];
  Eigen::MatrixXd y = ApplyMapRows(map, row);
  std::vector<float> out(static_cast<std::size_t>(y.cols()));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<float>(y(0, static_cast<Eigen::Index>(k)));
  return out;
}

// ----------------------------------------------------------- Persistence

namespace {

EmbeddingMatrix ToMatrix(const Eigen::MatrixXd& m) {
  EmbeddingMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  auto data = out.mutable_data();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data[static_cast<std::size_t>(i * m.cols() + j)] = static_cast<float>(m(i, j));
    }
  }
  return out;
}

EmbeddingMatrix ToRow(const Eigen::VectorXd& v) { return ToMatrix(v.transpose()); }

Eigen::MatrixXd FromMatrix(const EmbeddingMatrix& m) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.dim()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.Row(i);
    for (std::size_t j = 0; j < m.dim(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
    }
  }
  return out;
}

}  // namespace

void SaveAffineMap(const AffineMap& map, const std::filesystem::path& path) {
  std::string blob;
  for (const EmbeddingMatrix& block :
       {ToMatrix(map.weight), ToRow(map.bias), ToRow(map.input_scaler.mean),
        ToRow(map.input_scaler.std), ToRow(map.output_scaler.mean),
        ToRow(map.output_scaler.std)}) {
    blob += EncodeEmb1(block);
  }
  WriteFile(path, blob);

  nlohmann::ordered_json meta;
  meta["schema_version"] = "1";
  meta["format"] = "emb1x";
  meta["blocks"] = {"weight", "bias", "input_mean", "input_std", "output_mean", "output_std"};
  meta["input_dim"] = map.input_dim();
  meta["output_dim"] = map.output_dim();
  meta["l2_normalize_inputs"] = map.l2_normalize_inputs;
  meta["degenerate_input_dims"] = map.input_scaler.degenerate;
  meta["degenerate_output_dims"] = map.output_scaler.degenerate;
  WriteFile(path.string() + ".json", meta.dump(2) + "\n");
}

AffineMap LoadAffineMap(const std::filesystem::path& path) {
  std::string blob = ReadFile(path);
  std::size_t offset = 0;
  std::vector<EmbeddingMatrix> blocks;
  for (int i = 0; i < 6; ++i) blocks.push_back(DecodeEmb1(blob, offset, path.string()));
  if (offset != blob.size()) {
    throw Error(ErrorCode::kSizeMismatch, path.string() + ": trailing bytes after map blocks");
  }
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(ReadFile(path.string() + ".json"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, path.string() + ".json: " + e.what());
  }

  AffineMap map;
  map.weight = FromMatrix(blocks[0]);
  auto vec = [](const EmbeddingMatrix& m) -> Eigen::VectorXd {
    return FromMatrix(m).transpose().col(0);
  };
  map.bias = vec(blocks[1]);
  map.input_scaler.mean = vec(blocks[2]);
  map.input_scaler.std = vec(blocks[3]);
  map.output_scaler.mean = vec(blocks[4]);
  map.output_scaler.std = vec(blocks[5]);
  map.input_scaler.degenerate = meta.value("degenerate_input_dims", std::vector<std::size_t>{});
  map.output_scaler.degenerate = meta.value("degenerate_output_dims", std::vector<std::size_t>{});
  map.l2_normalize_inputs = meta.value("l2_normalize_inputs", false);

  const auto m = map.weight.cols();
  const auto n = map.weight.rows();
  if (map.bias.size() != n || map.input_scaler.mean.size() != m ||
      map.input_scaler.std.size() != m || map.output_scaler.mean.size() != n ||
      map.output_scaler.std.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, path.string() + ": map blocks disagree on shape");
  }
  return map;
}

}  // namespace vocabforge
