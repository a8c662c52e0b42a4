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

#include "vocabforge/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "vocabforge/error.hpp"
#include "vocabforge/io.hpp"
#include "vocabforge/parallel.hpp"
#include "vocabforge/random.hpp"
#include "vocabforge/text.hpp"

namespace vocabforge {

// --------------------------------------------------------------- Fertility

FertilityReport Fertility(const TokenizerModel& model, std::span<const std::string> documents,
                          const FertilityOptions& options) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts(documents.size());
  ParallelFor(documents.size(), options.threads, [&](std::size_t begin, std::size_t end) {
    std::unordered_map<std::string, std::uint64_t> cache;
    std::string buffer;
    for (std::size_t d = begin; d < end; ++d) {
      std::uint64_t words = 0;
      std::uint64_t tokens = 0;
      for (std::string_view word : text::SplitWords(documents[d])) {
        ++words;
        buffer.assign(" ");
        buffer.append(word);
        auto it = cache.find(buffer);
        if (it == cache.end()) {
          auto n = model.Encode(buffer, EncodeOptions{.add_prefix_space = false}).size();
          it = cache.emplace(buffer, n).first;
        }
        tokens += it->second;
      }
      counts[d] = {words, tokens};
    }
  });

  FertilityReport report;
  report.document_count = documents.size();
  for (const auto& [w, t] : counts) {
    report.word_count += w;
    report.token_count += t;
  }
  if (report.word_count == 0) throw Error(ErrorCode::kEmptyCorpus, "corpus contains no words");
  report.fertility =
      static_cast<double>(report.token_count) / static_cast<double>(report.word_count);
  if (options.per_document) report.per_document = std::move(counts);
  return report;
}

std::vector<std::string> LoadCorpus(const std::filesystem::path& path) {
  std::vector<std::string> documents;
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) documents.push_back(ReadFile(f));
    return documents;
  }
  std::string contents = ReadFile(path);
  std::string_view rest = contents;
  while (!rest.empty()) {
    std::size_t eol = rest.find('\n');
    std::string_view line = rest.substr(0, eol);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    documents.emplace_back(line);
    if (eol == std::string_view::npos) break;
    rest.remove_prefix(eol + 1);
  }
  return documents;
}

std::string FertilityHistogramCsv(const FertilityReport& report, double bin_width) {
  std::map<long, std::uint64_t> bins;
  for (const auto& [words, tokens] : report.per_document) {
    if (words == 0) continue;
    double f = static_cast<double>(tokens) / static_cast<double>(words);
    bins[static_cast<long>(std::floor(f / bin_width))] += 1;
  }
  std::string csv = "bin_lower,bin_upper,documents\n";
  char line[96];
  for (const auto& [bin, count] : bins) {
    std::snprintf(line, sizeof(line), "%.4f,%.4f,%llu\n", bin * bin_width, (bin + 1) * bin_width,
                  static_cast<unsigned long long>(count));
    csv += line;
  }
  return csv;
}

// ----------------------------------------------------------------- Anchors

namespace {

std::vector<TokenId> SampleFrom(std::vector<TokenId> pool, std::size_t n, SeededStream& rng) {
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + rng.Below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  return pool;
}

}  // namespace

std::vector<TokenId> SelectAnchors(const Vocabulary& vocab, MarkerConvention marker,
                                   std::size_t n_prefix, std::size_t n_nonprefix,
                                   std::uint64_t seed) {
  std::string_view mark = MarkerString(marker);
  std::vector<TokenId> prefix;
  std::vector<TokenId> nonprefix;
  for (TokenId id = 0; id < vocab.size(); ++id) {
    (vocab.Piece(id).starts_with(mark) ? prefix : nonprefix).push_back(id);
  }
  if (prefix.size() < n_prefix || nonprefix.size() < n_nonprefix) {
    throw Error(ErrorCode::kInsufficientTokens,
                "need " + std::to_string(n_prefix) + " prefix and " + std::to_string(n_nonprefix) +
                    " non-prefix tokens, vocabulary has " + std::to_string(prefix.size()) +
                    " and " + std::to_string(nonprefix.size()));
  }
  SeededStream rng(seed);
  auto anchors = SampleFrom(std::move(prefix), n_prefix, rng);
  auto rest = SampleFrom(std::move(nonprefix), n_nonprefix, rng);
  anchors.insert(anchors.end(), rest.begin(), rest.end());
  return anchors;
}

std::vector<TokenId> SampleTokens(std::size_t rows, std::size_t n, std::uint64_t seed) {
  std::vector<TokenId> pool(rows);
  for (TokenId i = 0; i < rows; ++i) pool[i] = i;
  if (n >= rows) return pool;
  SeededStream rng(seed);
  auto picked = SampleFrom(std::move(pool), n, rng);
  std::sort(picked.begin(), picked.end());
  return picked;
}

// -------------------------------------------------------------- Similarity

namespace {

double Norm(std::span<const float> v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

double Dot(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += static_cast<double>(a[k]) * b[k];
  return s;
}

std::vector<double> RelativeVector(const EmbeddingMatrix& m, TokenId token,
                                   std::span<const TokenId> anchors,
                                   const std::vector<double>& anchor_norms,
                                   Projection projection) {
  auto row = m.Row(token);
  double norm = projection == Projection::kCosine ? Norm(row) : 1.0;
  if (!(norm > 0.0)) {
    throw Error(ErrorCode::kZeroNormRow, "token " + std::to_string(token) + " has a zero embedding");
  }
  std::vector<double> r(anchors.size());
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    r[k] = Dot(row, m.Row(anchors[k])) / (norm * anchor_norms[k]);
  }
  return r;
}

}  // namespace

SimilarityScore RelativeSimilarity(const EmbeddingMatrix& a, const EmbeddingMatrix& b,
                                   std::span<const TokenId> anchors,
                                   std::optional<std::span<const TokenId>> tokens,
                                   Projection projection, unsigned threads) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matrices index different vocabularies (" + std::to_string(a.rows()) + " vs " +
                    std::to_string(b.rows()) + " rows)");
  }
  if (anchors.empty()) throw Error(ErrorCode::kInvalidArgument, "no anchors given");
  std::vector<double> norms_a(anchors.size(), 1.0);
  std::vector<double> norms_b(anchors.size(), 1.0);
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    if (anchors[k] >= a.rows()) {
      throw Error(ErrorCode::kInvalidArgument, "anchor id " + std::to_string(anchors[k]) +
                                                   " out of range");
    }
    if (projection == Projection::kCosine) {
      norms_a[k] = Norm(a.Row(anchors[k]));
      norms_b[k] = Norm(b.Row(anchors[k]));
      if (!(norms_a[k] > 0.0) || !(norms_b[k] > 0.0)) {
        throw Error(ErrorCode::kZeroNormRow,
                    "anchor " + std::to_string(anchors[k]) + " has a zero embedding");
      }
    }
  }

  std::vector<TokenId> all;
  std::span<const TokenId> sample;
  if (tokens) {
    sample = *tokens;
  } else {
    all.resize(a.rows());
    for (TokenId i = 0; i < all.size(); ++i) all[i] = i;
    sample = all;
  }
  for (TokenId t : sample) {
    if (t >= a.rows()) {
      throw Error(ErrorCode::kInvalidArgument, "token id " + std::to_string(t) + " out of range");
    }
  }
  if (sample.empty()) throw Error(ErrorCode::kInvalidArgument, "empty token sample");

  std::vector<double> per_token(sample.size());
  ParallelFor(sample.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto ra = RelativeVector(a, sample[i], anchors, norms_a, projection);
      auto rb = RelativeVector(b, sample[i], anchors, norms_b, projection);
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t k = 0; k < ra.size(); ++k) {
        dot += ra[k] * rb[k];
        na += ra[k] * ra[k];
        nb += rb[k] * rb[k];
      }
      if (!(na > 0.0) || !(nb > 0.0)) {
        throw Error(ErrorCode::kZeroNormRow, "relative representation of token " +
                                                 std::to_string(sample[i]) + " is zero");
      }
      per_token[i] = dot / (std::sqrt(na) * std::sqrt(nb));
    }
  });

  // Neumaier summation in fixed order, independent of the thread count.
  double sum = 0.0, compensation = 0.0;
  for (double v : per_token) {
    double t = sum + v;
    compensation += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  SimilarityScore score;
  score.score = 100.0 * (sum + compensation) / static_cast<double>(per_token.size());
  score.anchor_count = anchors.size();
  score.anchor_ids.assign(anchors.begin(), anchors.end());
  score.token_count = per_token.size();
  return score;
}

// --------------------------------------------------------------- Params

ParamCountReport ParamReport(std::uint64_t vocab_before, std::uint64_t vocab_after,
                             std::uint64_t dim, bool tied, std::uint64_t non_embedding_params) {
  if (vocab_before == 0 || vocab_after == 0 || dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "vocabulary sizes and dim must be positive");
  }
  const std::uint64_t copies = tied ? 1 : 2;
  ParamCountReport r;
  r.vocab_before = vocab_before;
  r.vocab_after = vocab_after;
  r.dim = dim;
  r.tied = tied;
  r.non_embedding_params = non_embedding_params;
  r.total_before = non_embedding_params + vocab_before * dim * copies;
  r.total_after = non_embedding_params + vocab_after * dim * copies;
  r.delta = static_cast<std::int64_t>(r.total_before) - static_cast<std::int64_t>(r.total_after);
  return r;
}

std::string FormatBillions(std::uint64_t count) {
  // Round half up at two decimals using integers only.
  std::uint64_t hundredths = (count + 5'000'000) / 10'000'000;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%llu.%02lluB",
                static_cast<unsigned long long>(hundredths / 100),
                static_cast<unsigned long long>(hundredths % 100));
  return buf;
}

}  // namespace vocabforge
