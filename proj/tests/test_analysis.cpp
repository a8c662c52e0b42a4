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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <doctest.h>

#include "test_util.hpp"
#include "vocabforge/analysis.hpp"
#include "vocabforge/error.hpp"

using namespace vocabforge;
using vftest::TempDir;

namespace {

const std::string kMeta = "\xE2\x96\x81";

TokenizerModel ItalianToy() {
  return vftest::MetaSpaceModel(
      {kMeta, "i", "l", "g", "a", "t", "o", kMeta + "i", kMeta + "il", kMeta + "g", kMeta + "ga",
       "tt", "tto"},
      {{kMeta, "i"}, {kMeta + "i", "l"}, {kMeta, "g"}, {kMeta + "g", "a"}, {"t", "t"},
       {"tt", "o"}});
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

// Straightforward double-precision reference for the similarity score.
double BruteSimilarity(const EmbeddingMatrix& a, const EmbeddingMatrix& b,
                       const std::vector<TokenId>& anchors) {
  auto cos = [](std::span<const float> x, std::span<const float> y) {
    double xy = 0, xx = 0, yy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      xy += double(x[k]) * y[k];
      xx += double(x[k]) * x[k];
      yy += double(y[k]) * y[k];
    }
    return xy / std::sqrt(xx * yy);
  };
  double total = 0;
  for (std::size_t t = 0; t < a.rows(); ++t) {
    std::vector<double> ra, rb;
    for (TokenId k : anchors) {
      ra.push_back(cos(a.Row(t), a.Row(k)));
      rb.push_back(cos(b.Row(t), b.Row(k)));
    }
    double xy = 0, xx = 0, yy = 0;
    for (std::size_t k = 0; k < ra.size(); ++k) {
      xy += ra[k] * rb[k];
      xx += ra[k] * ra[k];
      yy += rb[k] * rb[k];
    }
    total += xy / std::sqrt(xx * yy);
  }
  return 100.0 * total / static_cast<double>(a.rows());
}

}  // namespace

TEST_CASE("fertility: il gatto") {
  auto model = ItalianToy();
  std::vector<std::string> docs = {"il gatto"};
  auto r = Fertility(model, docs);
  CHECK(r.word_count == 2);
  CHECK(r.token_count == 3);
  CHECK(r.fertility == 1.5);

  std::vector<std::string> ones = {"il il", "il"};
  CHECK(Fertility(model, ones).fertility == 1.0);

  std::vector<std::string> blank = {"  ", "\n"};
  CHECK(CodeOf([&] { Fertility(model, blank); }) == ErrorCode::kEmptyCorpus);
}

TEST_CASE("fertility: aggregation, order and shard invariance") {
  auto model = ItalianToy();
  std::mt19937_64 rng(5);
  const std::vector<std::string> words = {"il", "gatto", "gatti", "tota", "giallo", "è", "ilgatto"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> docs;
    for (std::size_t d = 0, n = rng() % 8 + 1; d < n; ++d) {
      std::string doc;
      for (std::size_t w = 0, m = rng() % 6; w < m; ++w) {
        doc += (rng() % 3 ? " " : "\t ") + words[rng() % words.size()];
      }
      docs.push_back(doc);
    }
    docs.push_back("il");
    auto r = Fertility(model, docs, {.per_document = true, .threads = 1});
    std::uint64_t words_sum = 0, tokens_sum = 0;
    for (auto [w, t] : r.per_document) {
      words_sum += w;
      tokens_sum += t;
      CHECK(t >= w);
    }
    CHECK(words_sum == r.word_count);
    CHECK(tokens_sum == r.token_count);
    CHECK(r.fertility == static_cast<double>(tokens_sum) / static_cast<double>(words_sum));
    CHECK(r.fertility >= 1.0);

    std::shuffle(docs.begin(), docs.end(), rng);
    auto shuffled = Fertility(model, docs, {.per_document = false, .threads = 3});
    CHECK(shuffled.token_count == r.token_count);
    CHECK(shuffled.word_count == r.word_count);
    CHECK(shuffled.per_document.empty());
  }
}

TEST_CASE("corpus loading and histogram") {
  TempDir dir;
  auto lines = dir.Write("corpus.txt", "il gatto\n\nil\n");
  CHECK(LoadCorpus(lines).size() == 3);
  std::filesystem::create_directories(dir / "docs");
  dir.Write("docs/b.txt", "il\ngatto");
  dir.Write("docs/a.txt", "gatto");
  dir.Write("docs/skip.md", "il il il");
  auto docs = LoadCorpus(dir / "docs");
  REQUIRE(docs.size() == 2);
  CHECK(docs[0] == "gatto");
  CHECK(CodeOf([&] { LoadCorpus(dir / "none"); }) == ErrorCode::kIoError);

  auto r = Fertility(ItalianToy(), std::vector<std::string>{"il gatto", "il", "gatto"},
                     {.per_document = true});
  CHECK(FertilityHistogramCsv(r) ==
        "bin_lower,bin_upper,documents\n1.0000,1.1000,1\n1.5000,1.6000,1\n2.0000,2.1000,1\n");
}

TEST_CASE("anchor selection") {
  std::vector<std::string> pieces;
  for (int i = 0; i < 300; ++i) pieces.push_back(kMeta + "w" + std::to_string(i));
  for (int i = 0; i < 200; ++i) pieces.push_back("s" + std::to_string(i));
  Vocabulary vocab(pieces);
  auto anchors = SelectAnchors(vocab, MarkerConvention::kMetaSpace, 128, 128, 7);
  CHECK(anchors.size() == 256);
  CHECK(std::set<TokenId>(anchors.begin(), anchors.end()).size() == 256);
  for (std::size_t i = 0; i < 256; ++i) CHECK((anchors[i] < 300) == (i < 128));
  CHECK(SelectAnchors(vocab, MarkerConvention::kMetaSpace, 128, 128, 7) == anchors);
  CHECK(SelectAnchors(vocab, MarkerConvention::kMetaSpace, 128, 128, 8) != anchors);

  Vocabulary one({kMeta + "a", "b", "c"});
  CHECK(CodeOf([&] { SelectAnchors(one, MarkerConvention::kMetaSpace, 2, 1, 0); }) ==
        ErrorCode::kInsufficientTokens);
}

TEST_CASE("similarity: self, scaling, symmetry") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = vftest::RandomMatrix(40, 8, rng);
    auto anchors = SampleTokens(40, 10, trial);
    auto self = RelativeSimilarity(a, a, anchors);
    CHECK(std::abs(self.score - 100.0) < 1e-4);
    CHECK(self.anchor_count == 10);
    CHECK(self.token_count == 40);

    EmbeddingMatrix scaled = a;
    for (auto& v : scaled.mutable_data()) v *= 3.0f;
    CHECK(std::abs(RelativeSimilarity(a, scaled, anchors).score - 100.0) < 1e-4);

    auto b = vftest::RandomMatrix(40, 5, rng);
    double ab = RelativeSimilarity(a, b, anchors).score;
    double ba = RelativeSimilarity(b, a, anchors).score;
    CHECK(std::abs(ab - ba) < 1e-9);

    EmbeddingMatrix per_row = b;
    std::uniform_real_distribution<float> factor(0.1f, 10.0f);
    for (std::size_t r = 0; r < per_row.rows(); ++r) {
      float f = factor(rng);
      for (auto& v : per_row.MutableRow(r)) v *= f;
    }
    CHECK(std::abs(RelativeSimilarity(a, per_row, anchors).score - ab) < 1e-4);
  }
}

TEST_CASE("similarity: shuffled rows against a brute-force reference") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = vftest::RandomMatrix(64, 8, rng);
    std::vector<std::size_t> perm(64);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EmbeddingMatrix b(64, 8);
    for (std::size_t r = 0; r < 64; ++r) {
      std::copy(a.Row(perm[r]).begin(), a.Row(perm[r]).end(), b.MutableRow(r).begin());
    }
    auto anchors = SampleTokens(64, 16, trial);
    double score = RelativeSimilarity(a, b, anchors, std::nullopt, Projection::kCosine, 2).score;
    CHECK(std::abs(score - BruteSimilarity(a, b, anchors)) < 1e-6);
    CHECK(score < 90.0);
  }
}

TEST_CASE("similarity: sampling, thread count and errors") {
  std::mt19937_64 rng(37);
  auto a = vftest::RandomMatrix(50, 6, rng);
  auto b = vftest::RandomMatrix(50, 6, rng);
  auto anchors = SampleTokens(50, 8, 1);
  auto tokens = SampleTokens(50, 20, 2);
  CHECK(tokens.size() == 20);
  auto s1 = RelativeSimilarity(a, b, anchors, tokens, Projection::kCosine, 1);
  auto s4 = RelativeSimilarity(a, b, anchors, tokens, Projection::kCosine, 4);
  CHECK(s1.score == s4.score);
  CHECK(s1.token_count == 20);
  CHECK(std::abs(RelativeSimilarity(a, a, anchors, std::nullopt, Projection::kDot).score - 100) <
        1e-4);

  EmbeddingMatrix zero = a;
  for (auto& v : zero.MutableRow(3)) v = 0.0f;
  CHECK(CodeOf([&] { RelativeSimilarity(zero, b, anchors); }) == ErrorCode::kZeroNormRow);
  auto c = vftest::RandomMatrix(49, 6, rng);
  CHECK(CodeOf([&] { RelativeSimilarity(a, c, anchors); }) == ErrorCode::kDimensionMismatch);
}

TEST_CASE("parameter counts") {
  // Llama-3.1-8B: untied, non-embedding parameters 6,979,588,096.
  auto llama = ParamReport(128256, 32768, 4096, false, 6979588096ull);
  CHECK(llama.delta == 782237696);
  CHECK(FormatBillions(llama.total_before) == "8.03B");
  CHECK(FormatBillions(llama.total_after) == "7.25B");
  CHECK(FormatBillions(static_cast<std::uint64_t>(llama.delta)) == "0.78B");

  auto tied = ParamReport(32000, 32768, 4096, true, 7000000000ull);
  CHECK(tied.delta == -3145728);
  CHECK(tied.total_after - tied.total_before == 768ull * 4096ull);

  CHECK(ParamReport(1000, 1000, 64, false, 5).delta == 0);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::uint64_t before = rng() % 200000 + 1, after = rng() % 200000 + 1, dim = rng() % 8192 + 1;
    bool t = rng() % 2;
    auto r = ParamReport(before, after, dim, t, rng() % 10000000000ull);
    CHECK(r.delta == (static_cast<std::int64_t>(before) - static_cast<std::int64_t>(after)) *
                         static_cast<std::int64_t>(dim) * (t ? 1 : 2));
  }
  CHECK(FormatBillions(7244999999) == "7.24B");
  CHECK(FormatBillions(7245000000) == "7.25B");
}
