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

#include "vocabforge/heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "vocabforge/error.hpp"
#include "vocabforge/parallel.hpp"
#include "vocabforge/random.hpp"
#include "vocabforge/text.hpp"

namespace vocabforge {

// ------------------------------------------------------------------ Enums

std::string_view MethodName(Method m) {
  switch (m) {
    case Method::kRandom: return "random";
    case Method::kFvt: return "fvt";
    case Method::kClp: return "clp";
    case Method::kSava: return "sava";
  }
  return "fvt";
}

Method ParseMethod(std::string_view name) {
  for (Method m : {Method::kRandom, Method::kFvt, Method::kClp, Method::kSava}) {
    if (MethodName(m) == name) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + std::string(name) + "'");
}

std::string_view NegativePolicyName(NegativePolicy p) {
  switch (p) {
    case NegativePolicy::kClampZero: return "clamp-zero";
    case NegativePolicy::kShiftMin: return "shift-min";
    case NegativePolicy::kAbsolute: return "absolute";
  }
  return "clamp-zero";
}

NegativePolicy ParseNegativePolicy(std::string_view name) {
  for (auto p : {NegativePolicy::kClampZero, NegativePolicy::kShiftMin, NegativePolicy::kAbsolute}) {
    if (NegativePolicyName(p) == name) return p;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown negative policy '" + std::string(name) + "'");
}

std::string_view RandomMomentsName(RandomMoments m) {
  return m == RandomMoments::kScalar ? "scalar" : "per-dimension";
}

RandomMoments ParseRandomMoments(std::string_view name) {
  if (name == "per-dimension") return RandomMoments::kPerDimension;
  if (name == "scalar") return RandomMoments::kScalar;
  throw Error(ErrorCode::kInvalidArgument, "unknown random moments '" + std::string(name) + "'");
}

std::string_view FallbackName(FallbackKind f) {
  return f == FallbackKind::kMeanRow ? "mean-row" : "random";
}

FallbackKind ParseFallback(std::string_view name) {
  if (name == "random") return FallbackKind::kRandom;
  if (name == "mean-row") return FallbackKind::kMeanRow;
  throw Error(ErrorCode::kInvalidArgument, "unknown fallback '" + std::string(name) + "'");
}

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kCopied: return "copied";
    case Provenance::kHeuristic: return "heuristic";
    case Provenance::kFallback: return "fallback";
  }
  return "copied";
}

// --------------------------------------------------------------- Assemble

namespace {

bool RequestsFallback(ErrorCode code) {
  return code == ErrorCode::kFallbackRequired || code == ErrorCode::kDegenerateSimilarity ||
         code == ErrorCode::kZeroNormEmbedding;
}

bool Finite(std::span<const float> row) {
  return std::all_of(row.begin(), row.end(), [](float v) { return std::isfinite(v); });
}

}  // namespace

AdaptResult Assemble(const EmbeddingMatrix& source, const TokenPartition& partition,
                     const RowInitializer& initializer, const RowInitializer& fallback,
                     unsigned threads) {
  auto started = std::chrono::steady_clock::now();
  if (source.rows() != partition.source_size) {
    throw Error(ErrorCode::kDimensionMismatch,
                "source matrix has " + std::to_string(source.rows()) +
                    " rows but the source vocabulary has " +
                    std::to_string(partition.source_size) + " tokens");
  }
  ValidatePartition(partition, partition.source_size, partition.target_size);

  const std::size_t dim = source.dim();
  AdaptResult result{EmbeddingMatrix(partition.target_size, dim), {}};
  auto& report = result.report;
  report.provenance.assign(partition.target_size, Provenance::kCopied);
  report.partition_collisions = partition.collision_count;

  for (const auto& tok : partition.shared) {
    auto from = source.Row(tok.source_id);
    std::copy(from.begin(), from.end(), result.matrix.MutableRow(tok.target_id).begin());
  }

  std::vector<std::string> reasons(partition.novel.size());
  ParallelFor(partition.novel.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const TokenId id = partition.novel[i].target_id;
      std::vector<float> row;
      try {
        row = initializer(id);
        if (row.size() != dim) {
          throw Error(ErrorCode::kDimensionMismatch,
                      "initializer returned " + std::to_string(row.size()) + " values for dim " +
                          std::to_string(dim));
        }
        if (!Finite(row)) throw Error(ErrorCode::kFallbackRequired, "non-finite row");
        report.provenance[id] = Provenance::kHeuristic;
      } catch (const Error& e) {
        if (!RequestsFallback(e.code())) throw;
        reasons[i] = e.what();
        row = fallback(id);
        if (row.size() != dim || !Finite(row)) {
          throw Error(ErrorCode::kDimensionMismatch, "fallback produced an invalid row");
        }
        report.provenance[id] = Provenance::kFallback;
      }
      std::copy(row.begin(), row.end(), result.matrix.MutableRow(id).begin());
    }
  });

  report.copied_count = partition.shared.size();
  for (std::size_t i = 0; i < partition.novel.size(); ++i) {
    if (reasons[i].empty()) {
      ++report.initialized_count;
    } else {
      ++report.fallback_count;
      report.fallback_reasons.emplace(partition.novel[i].target_id, std::move(reasons[i]));
    }
  }
  report.timing_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

// ------------------------------------------------------------------ Random

std::vector<float> RandomRow(TokenId target_id, const EmbeddingStats& stats, std::uint64_t seed,
                             RandomMoments moments) {
  CounterRng rng(seed, target_id);
  std::vector<float> row(stats.mean.size());
  for (std::size_t k = 0; k < row.size(); ++k) {
    double mu = moments == RandomMoments::kScalar ? stats.scalar_mean : stats.mean[k];
    double var = moments == RandomMoments::kScalar ? stats.scalar_variance : stats.variance[k];
    row[k] = static_cast<float>(mu + std::sqrt(var) * rng.Normal(k));
  }
  return row;
}

// --------------------------------------------------------------------- FVT

std::vector<TokenId> FvtDecomposition(std::string_view target_piece,
                                      MarkerConvention target_marker,
                                      const TokenizerModel& source_tokenizer) {
  std::string surface;
  if (auto byte = text::ParseByteFallback(target_piece)) {
    surface.push_back(static_cast<char>(*byte));
  } else {
    // A leading space in the surface form is the word boundary, so word-initial
    // pieces reach the source tokenizer with their marker.
    surface = PieceToSurface(target_piece, target_marker);
  }
  if (surface.empty()) {
    throw Error(ErrorCode::kFallbackRequired, "piece is empty after canonicalization");
  }
  std::vector<TokenId> ids;
  try {
    ids = source_tokenizer.Encode(surface, EncodeOptions{.add_prefix_space = false});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUnencodableInput) throw;
    throw Error(ErrorCode::kFallbackRequired, e.what());
  }
  if (auto unk = source_tokenizer.unk_id()) std::erase(ids, *unk);
  if (ids.empty()) {
    throw Error(ErrorCode::kFallbackRequired,
                "'" + std::string(target_piece) + "' has no known source decomposition");
  }
  return ids;
}

std::vector<float> FvtRow(std::string_view target_piece, MarkerConvention target_marker,
                          const TokenizerModel& source_tokenizer, const EmbeddingMatrix& source) {
  auto ids = FvtDecomposition(target_piece, target_marker, source_tokenizer);
  std::vector<double> sum(source.dim(), 0.0);
  for (TokenId id : ids) {
    if (id >= source.rows()) {
      throw Error(ErrorCode::kDimensionMismatch, "source id " + std::to_string(id) +
                                                     " has no embedding row");
    }
    auto row = source.Row(id);
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += row[k];
  }
  std::vector<float> out(sum.size());
  const double count = static_cast<double>(ids.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<float>(sum[k] / count);
  return out;
}

// --------------------------------------------------------------------- CLP

ClpContext::ClpContext(const EmbeddingMatrix& helper, const TokenPartition& partition)
    : helper_(&helper) {
  const auto count = static_cast<Eigen::Index>(partition.shared.size());
  const auto m = static_cast<Eigen::Index>(helper.dim());
  shared_unit_.setZero(count, m);
  shared_usable_.assign(partition.shared.size(), false);
  for (Eigen::Index i = 0; i < count; ++i) {
    TokenId id = partition.shared[static_cast<std::size_t>(i)].target_id;
    if (id >= helper.rows()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "helper matrix has no row for target id " + std::to_string(id));
    }
    auto row = helper.Row(id);
    for (Eigen::Index k = 0; k < m; ++k) shared_unit_(i, k) = row[static_cast<std::size_t>(k)];
    double norm = shared_unit_.row(i).norm();
    if (norm > 0.0) {
      shared_unit_.row(i) /= norm;
      shared_usable_[static_cast<std::size_t>(i)] = true;
    }
  }
}

std::vector<ClpContext::Weight> ClpContext::Weights(TokenId target_id, std::size_t top_k,
                                                    NegativePolicy policy) const {
  if (target_id >= helper_->rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "helper matrix has no row for target id " + std::to_string(target_id));
  }
  auto row = helper_->Row(target_id);
  Eigen::VectorXd h(static_cast<Eigen::Index>(row.size()));
  for (std::size_t k = 0; k < row.size(); ++k) h(static_cast<Eigen::Index>(k)) = row[k];
  double norm = h.norm();
  if (!(norm > 0.0)) {
    throw Error(ErrorCode::kZeroNormEmbedding,
                "helper embedding of target id " + std::to_string(target_id) + " is zero");
  }
  Eigen::VectorXd cosine = shared_unit_ * (h / norm);

  std::vector<Weight> support;
  support.reserve(shared_usable_.size());
  for (std::size_t j = 0; j < shared_usable_.size(); ++j) {
    if (shared_usable_[j]) support.push_back({j, cosine(static_cast<Eigen::Index>(j))});
  }
  if (support.empty()) {
    throw Error(ErrorCode::kDegenerateSimilarity, "no shared token has a usable helper row");
  }
  if (top_k > 0 && top_k < support.size()) {
    std::partial_sort(support.begin(), support.begin() + static_cast<std::ptrdiff_t>(top_k),
                      support.end(), [](const Weight& a, const Weight& b) {
                        return a.weight != b.weight ? a.weight > b.weight
                                                    : a.shared_index < b.shared_index;
                      });
    support.resize(top_k);
    std::sort(support.begin(), support.end(),
              [](const Weight& a, const Weight& b) { return a.shared_index < b.shared_index; });
  }

  double floor = 0.0;
  if (policy == NegativePolicy::kShiftMin) {
    floor = std::min_element(support.begin(), support.end(), [](const Weight& a, const Weight& b) {
              return a.weight < b.weight;
            })->weight;
  }
  double total = 0.0;
  for (auto& w : support) {
    switch (policy) {
      case NegativePolicy::kClampZero: w.weight = std::max(0.0, w.weight); break;
      case NegativePolicy::kShiftMin: w.weight -= floor; break;
      case NegativePolicy::kAbsolute: w.weight = std::abs(w.weight); break;
    }
    total += w.weight;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorCode::kDegenerateSimilarity,
                "all similarity weights vanish for target id " + std::to_string(target_id));
  }
  std::erase_if(support, [](const Weight& w) { return w.weight == 0.0; });
  for (auto& w : support) w.weight /= total;
  return support;
}

std::vector<float> ClpRow(TokenId target_id, const EmbeddingMatrix& source,
                          const TokenPartition& partition, const ClpContext& context,
                          std::size_t top_k, NegativePolicy policy) {
  auto weights = context.Weights(target_id, top_k, policy);
  std::vector<double> acc(source.dim(), 0.0);
  for (const auto& w : weights) {
    auto row = source.Row(partition.shared[w.shared_index].source_id);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w.weight * row[k];
  }
  return {acc.begin(), acc.end()};
}

// -------------------------------------------------------------------- SAVA

std::vector<float> SavaRow(TokenId target_id, const EmbeddingMatrix& helper, const AffineMap& phi) {
  if (helper.dim() != phi.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "helper dim " + std::to_string(helper.dim()) + " but map expects " +
                    std::to_string(phi.input_dim()));
  }
  if (target_id >= helper.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "helper matrix has no row for target id " + std::to_string(target_id));
  }
  return ApplyMap(phi, helper.Row(target_id));
}

// ------------------------------------------------------------------- Adapt

AdaptResult AdaptWithPartition(const EmbeddingMatrix& source, const TokenPartition& partition,
                               const TokenizerModel& source_tokenizer,
                               MarkerConvention target_marker, const EmbeddingMatrix* helper,
                               const HeuristicConfig& config) {
  auto started = std::chrono::steady_clock::now();
  if (config.NeedsHelper() && helper == nullptr) {
    throw Error(ErrorCode::kPrecondition, "method " + std::string(MethodName(config.method)) +
                                              " requires helper embeddings");
  }
  if (source.rows() != partition.source_size) {
    throw Error(ErrorCode::kDimensionMismatch,
                "source matrix has " + std::to_string(source.rows()) +
                    " rows but the source vocabulary has " +
                    std::to_string(partition.source_size) + " tokens");
  }
  if (config.NeedsHelper() && helper->rows() != partition.target_size) {
    throw Error(ErrorCode::kDimensionMismatch,
                "helper matrix has " + std::to_string(helper->rows()) +
                    " rows but the target vocabulary has " +
                    std::to_string(partition.target_size) + " tokens");
  }

  const EmbeddingStats stats = ComputeStats(source);
  std::vector<float> mean_row(stats.mean.begin(), stats.mean.end());
  RowInitializer fallback;
  if (config.fallback == FallbackKind::kMeanRow) {
    fallback = [&mean_row](TokenId) { return mean_row; };
  } else {
    fallback = [&stats, &config](TokenId id) {
      return RandomRow(id, stats, config.seed, config.random_moments);
    };
  }

  // Piece lookup for FVT.
  std::vector<std::string_view> novel_piece(partition.target_size);
  for (const auto& tok : partition.novel) novel_piece[tok.target_id] = tok.piece;

  std::optional<ClpContext> clp;
  std::optional<AffineMap> phi;
  std::optional<FitReport> fit;
  RowInitializer initializer;
  switch (config.method) {
    case Method::kRandom:
      initializer = [&](TokenId id) {
        return RandomRow(id, stats, config.seed, config.random_moments);
      };
      break;
    case Method::kFvt:
      initializer = [&](TokenId id) {
        return FvtRow(novel_piece[id], target_marker, source_tokenizer, source);
      };
      break;
    case Method::kClp:
      clp.emplace(*helper, partition);
      initializer = [&](TokenId id) {
        return ClpRow(id, source, partition, *clp, config.clp_top_k, config.clp_negative_policy);
      };
      break;
    case Method::kSava: {
      PairSet pairs = CollectPairs(*helper, source, partition, config.sava_pair_limit, config.seed);
      TrainConfig train = config.train;
      train.seed = config.seed;
      auto [map, report] = FitGradient(pairs, train);
      phi = std::move(map);
      fit = std::move(report);
      initializer = [&](TokenId id) { return SavaRow(id, *helper, *phi); };
      break;
    }
  }

  AdaptResult result = Assemble(source, partition, initializer, fallback, config.threads);
  result.report.config = config;
  result.report.fit = std::move(fit);
  result.report.timing_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

AdaptResult Adapt(const EmbeddingMatrix& source, const TokenizerModel& source_tokenizer,
                  const TokenizerModel& target_tokenizer, const EmbeddingMatrix* helper,
                  const HeuristicConfig& config) {
  if (config.NeedsHelper() && helper == nullptr) {
    throw Error(ErrorCode::kPrecondition, "method " + std::string(MethodName(config.method)) +
                                              " requires helper embeddings");
  }
  TokenPartition partition =
      Partition(source_tokenizer.vocab(), target_tokenizer.vocab(),
                MarkerMap{source_tokenizer.marker(), target_tokenizer.marker(), true});
  return AdaptWithPartition(source, partition, source_tokenizer, target_tokenizer.marker(), helper,
                            config);
}

}  // namespace vocabforge
