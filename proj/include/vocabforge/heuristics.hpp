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
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vocabforge/affine.hpp"
#include "vocabforge/embedding.hpp"
#include "vocabforge/tokenizer.hpp"

namespace vocabforge {

enum class Method { kRandom, kFvt, kClp, kSava };
enum class NegativePolicy { kClampZero, kShiftMin, kAbsolute };
enum class RandomMoments { kPerDimension, kScalar };
enum class FallbackKind { kRandom, kMeanRow };

std::string_view MethodName(Method m);
Method ParseMethod(std::string_view name);
std::string_view NegativePolicyName(NegativePolicy p);
NegativePolicy ParseNegativePolicy(std::string_view name);
std::string_view RandomMomentsName(RandomMoments m);
RandomMoments ParseRandomMoments(std::string_view name);
std::string_view FallbackName(FallbackKind f);
FallbackKind ParseFallback(std::string_view name);

struct HeuristicConfig {
  Method method = Method::kFvt;
  std::uint64_t seed = 0;
  std::size_t clp_top_k = 0;  // 0 = dense over the whole intersection
  NegativePolicy clp_negative_policy = NegativePolicy::kClampZero;
  RandomMoments random_moments = RandomMoments::kPerDimension;
  FallbackKind fallback = FallbackKind::kRandom;
  TrainConfig train;                       // sava only
  std::optional<std::size_t> sava_pair_limit;  // sava only
  unsigned threads = 1;

  bool NeedsHelper() const { return method == Method::kClp || method == Method::kSava; }
};

enum class Provenance : std::uint8_t { kCopied, kHeuristic, kFallback };
std::string_view ProvenanceName(Provenance p);

struct AdaptationReport {
  std::size_t copied_count = 0;
  std::size_t initialized_count = 0;
  std::size_t fallback_count = 0;
  std::vector<Provenance> provenance;          // indexed by target id
  std::map<TokenId, std::string> fallback_reasons;
  HeuristicConfig config;
  std::optional<FitReport> fit;                // sava only
  std::size_t partition_collisions = 0;
  double timing_seconds = 0.0;
};

struct AdaptResult {
  EmbeddingMatrix matrix;
  AdaptationReport report;
};

// Produces the row for a novel target id. Throwing Error with kFallbackRequired,
// kDegenerateSimilarity or kZeroNormEmbedding asks Assemble for the fallback.
// Must be safe to call concurrently.
using RowInitializer = std::function<std::vector<float>(TokenId target_id)>;

// Copies shared rows bit-exactly and fills novel rows from `initializer`.
// Errors: DimensionMismatch, PartitionInconsistent.
AdaptResult Assemble(const EmbeddingMatrix& source, const TokenPartition& partition,
                     const RowInitializer& initializer, const RowInitializer& fallback,
                     unsigned threads = 1);

// Row ~ N(mean, variance) from a generator keyed by (seed, target id).
std::vector<float> RandomRow(TokenId target_id, const EmbeddingStats& stats, std::uint64_t seed,
                             RandomMoments moments = RandomMoments::kPerDimension);

// Mean of the source rows of the piece's source tokenization. Throws
// FallbackRequired when that tokenization is empty or only unknowns.
std::vector<float> FvtRow(std::string_view target_piece, MarkerConvention target_marker,
                          const TokenizerModel& source_tokenizer,
                          const EmbeddingMatrix& source);
// The source ids FvtRow averages over.
std::vector<TokenId> FvtDecomposition(std::string_view target_piece,
                                      MarkerConvention target_marker,
                                      const TokenizerModel& source_tokenizer);

// Unit-normalized helper rows of the shared tokens, built once per run.
class ClpContext {
 public:
  ClpContext(const EmbeddingMatrix& helper, const TokenPartition& partition);

  struct Weight {
    std::size_t shared_index;  // into partition.shared
    double weight;
  };
  // Normalized similarity weights of a novel token over the shared support.
  // Errors: ZeroNormEmbedding, DegenerateSimilarity.
  std::vector<Weight> Weights(TokenId target_id, std::size_t top_k, NegativePolicy policy) const;

 private:
  const EmbeddingMatrix* helper_;
  Eigen::MatrixXd shared_unit_;      // |shared| x m
  std::vector<bool> shared_usable_;  // false for zero-norm helper rows
};

std::vector<float> ClpRow(TokenId target_id, const EmbeddingMatrix& source,
                          const TokenPartition& partition, const ClpContext& context,
                          std::size_t top_k, NegativePolicy policy);

// phi applied to the helper row. Errors: DimensionMismatch.
std::vector<float> SavaRow(TokenId target_id, const EmbeddingMatrix& helper, const AffineMap& phi);

// Full pipeline for one embedding matrix: partition, (fit phi,) assemble.
// Errors: Precondition (missing helper), DimensionMismatch, plus those of the
// sub-steps.
AdaptResult Adapt(const EmbeddingMatrix& source, const TokenizerModel& source_tokenizer,
                  const TokenizerModel& target_tokenizer, const EmbeddingMatrix* helper,
                  const HeuristicConfig& config);

// Same, against a precomputed partition. Untied models call this once for
// the input embeddings and once for the head.
AdaptResult AdaptWithPartition(const EmbeddingMatrix& source, const TokenPartition& partition,
                               const TokenizerModel& source_tokenizer,
                               MarkerConvention target_marker, const EmbeddingMatrix* helper,
                               const HeuristicConfig& config);

}  // namespace vocabforge
