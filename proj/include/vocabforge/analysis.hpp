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
#include <string>
#include <vector>

#include "vocabforge/embedding.hpp"
#include "vocabforge/tokenizer.hpp"

namespace vocabforge {

struct FertilityReport {
  std::string corpus_label;
  std::string tokenizer_label;
  std::uint64_t document_count = 0;
  std::uint64_t word_count = 0;
  std::uint64_t token_count = 0;
  double fertility = 0.0;
  // Per-document (words, tokens); filled when requested.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> per_document;
};

struct FertilityOptions {
  bool per_document = false;
  unsigned threads = 1;
};

// Words are maximal runs of non-whitespace; each is encoded with a leading
// word boundary. fertility = total tokens / total words. Throws EmptyCorpus.
FertilityReport Fertility(const TokenizerModel& model, std::span<const std::string> documents,
                          const FertilityOptions& options = {});

// A file yields one document per line; a directory yields one document per
// .txt file, in file-name order.
std::vector<std::string> LoadCorpus(const std::filesystem::path& path);

// bin_lower,bin_upper,documents over per-document fertility.
std::string FertilityHistogramCsv(const FertilityReport& report, double bin_width = 0.1);

// Seeded uniform sample without replacement: n_prefix pieces starting with
// the marker, then n_nonprefix others. Throws InsufficientTokens.
std::vector<TokenId> SelectAnchors(const Vocabulary& vocab, MarkerConvention marker,
                                   std::size_t n_prefix, std::size_t n_nonprefix,
                                   std::uint64_t seed);

// n distinct ids from [0, rows), seeded, ascending.
std::vector<TokenId> SampleTokens(std::size_t rows, std::size_t n, std::uint64_t seed);

enum class Projection { kCosine, kDot };

struct SimilarityScore {
  double score = 0.0;  // 0..100
  std::size_t anchor_count = 0;
  std::vector<TokenId> anchor_ids;
  std::size_t token_count = 0;
  std::uint64_t seed = 0;
};

// For every sampled token, relative vectors r(t) = [proj(E^t, E^anchor_k)]_k
// in both spaces; score = 100 * mean_t cos(r_a(t), r_b(t)). Throws ZeroNormRow
// and DimensionMismatch.
SimilarityScore RelativeSimilarity(const EmbeddingMatrix& a, const EmbeddingMatrix& b,
                                   std::span<const TokenId> anchors,
                                   std::optional<std::span<const TokenId>> tokens = std::nullopt,
                                   Projection projection = Projection::kCosine,
                                   unsigned threads = 1);

struct ParamCountReport {
  std::uint64_t vocab_before = 0;
  std::uint64_t vocab_after = 0;
  std::uint64_t dim = 0;
  bool tied = false;
  std::uint64_t non_embedding_params = 0;
  std::uint64_t total_before = 0;
  std::uint64_t total_after = 0;
  std::int64_t delta = 0;  // total_before - total_after
};

ParamCountReport ParamReport(std::uint64_t vocab_before, std::uint64_t vocab_after,
                             std::uint64_t dim, bool tied, std::uint64_t non_embedding_params);

// 8030261248 -> "8.03B"
std::string FormatBillions(std::uint64_t count);

}  // namespace vocabforge
