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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vocabforge/embedding.hpp"
#include "vocabforge/tokenizer.hpp"

namespace vocabforge {

// Per-dimension standard scaler. Zero-variance dimensions get std = 1 and
// are listed in `degenerate`.
struct Scaler {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
  std::vector<std::size_t> degenerate;

  static Scaler Fit(const Eigen::MatrixXd& rows);
  static Scaler Identity(std::size_t dim);
  Eigen::MatrixXd Forward(const Eigen::MatrixXd& rows) const;
  Eigen::MatrixXd Inverse(const Eigen::MatrixXd& rows) const;
};

// phi(x) = output_scaler^-1( W * l2norm(input_scaler(x)) + b ), mapping the
// helper space R^m onto the source space R^n.
struct AffineMap {
  Eigen::MatrixXd weight;  // n x m
  Eigen::VectorXd bias;    // n
  Scaler input_scaler;
  Scaler output_scaler;
  bool l2_normalize_inputs = false;

  std::size_t input_dim() const { return static_cast<std::size_t>(weight.cols()); }
  std::size_t output_dim() const { return static_cast<std::size_t>(weight.rows()); }

  static AffineMap Identity(std::size_t dim);
};

struct TrainConfig {
  int steps = 1000;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  double ridge_lambda = 1e-6;  // closed-form oracle only
  bool l2_normalize_inputs = false;
  bool compute_oracle = true;
};

struct FitReport {
  double initial_mse = 0.0;
  double final_mse = 0.0;
  std::size_t pair_count = 0;
  std::optional<double> oracle_mse;
  std::optional<double> frobenius_gap_to_oracle;
  std::vector<double> loss_curve;  // loss before each step
  bool loss_increased = false;
};

// Row i of x is the helper embedding and row i of y the source embedding of
// the i-th shared token.
struct PairSet {
  Eigen::MatrixXd x;  // N x m
  Eigen::MatrixXd y;  // N x n
  std::vector<TokenId> target_ids;

  std::size_t size() const { return static_cast<std::size_t>(x.rows()); }
};

// One pair per shared token in partition order. `limit` keeps a seeded
// uniform subset (still in partition order). Throws EmptyIntersection.
PairSet CollectPairs(const EmbeddingMatrix& helper, const EmbeddingMatrix& source,
                     const TokenPartition& partition, std::optional<std::size_t> limit = {},
                     std::uint64_t seed = 0);

// Full-batch Adam on the mean squared error in scaled space.
std::pair<AffineMap, FitReport> FitGradient(const PairSet& pairs, const TrainConfig& config);

// Ridge-regularized normal equations on the same representation FitGradient
// trains on. The bias is not penalized. Throws SingularSystem when lambda is
// zero and the design is rank deficient.
AffineMap FitClosedForm(const PairSet& pairs, double ridge_lambda,
                        bool l2_normalize_inputs = false);

// MSE of the map's affine part in its own scaled space over `pairs`.
double ScaledMse(const AffineMap& map, const PairSet& pairs);

std::vector<float> ApplyMap(const AffineMap& map, std::span<const float> x);
Eigen::MatrixXd ApplyMapRows(const AffineMap& map, const Eigen::MatrixXd& x);

// Binary blocks (W, b, input mean/std, output mean/std) as consecutive EMB1
// records at `path`, metadata as JSON at `path` + ".json".
void SaveAffineMap(const AffineMap& map, const std::filesystem::path& path);
AffineMap LoadAffineMap(const std::filesystem::path& path);

}  // namespace vocabforge
