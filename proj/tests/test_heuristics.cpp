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
#include "vocabforge/error.hpp"
#include "vocabforge/heuristics.hpp"

using namespace vocabforge;

namespace {

TokenizerModel CharModel(std::vector<std::string> pieces, std::vector<MergeRule> merges = {}) {
  TokenizerOptions options;
  options.marker = MarkerConvention::kNone;
  return TokenizerModel(Vocabulary(std::move(pieces)), std::move(merges), options);
}

TokenPartition NonePartition(const Vocabulary& source, const Vocabulary& target) {
  return Partition(source, target, {MarkerConvention::kNone, MarkerConvention::kNone, true});
}

std::vector<float> RowOf(const EmbeddingMatrix& m, std::size_t r) {
  return {m.Row(r).begin(), m.Row(r).end()};
}

// Random toy problem: single letters are always in the source vocabulary so
// every target piece has an FVT decomposition.
struct Instance {
  TokenizerModel source_tok;
  Vocabulary target;
  EmbeddingMatrix source;
  EmbeddingMatrix helper;
};

Instance RandomInstance(std::mt19937_64& rng) {
  const std::string letters = "abcdef";
  std::vector<std::string> src;
  std::set<std::string> seen;
  for (char c : letters) {
    src.emplace_back(1, c);
    seen.insert(src.back());
  }
  std::vector<MergeRule> merges;
  for (std::size_t i = 0, n = rng() % 8; i < n; ++i) {
    std::string l = src[rng() % src.size()];
    std::string r = src[rng() % src.size()];
    if (!seen.insert(l + r).second) continue;
    merges.push_back({l, r});
    src.push_back(l + r);
  }
  std::vector<std::string> tgt;
  std::set<std::string> tseen;
  std::size_t target_size = rng() % 12 + 4;
  while (tgt.size() < target_size) {
    std::string piece;
    if (rng() % 2) {
      piece = src[rng() % src.size()];
    } else {
      for (std::size_t i = 0, len = rng() % 4 + 1; i < len; ++i) piece.push_back(letters[rng() % 6]);
    }
    if (tseen.insert(piece).second) tgt.push_back(piece);
  }
  std::size_t dim = rng() % 5 + 2;
  auto source = vftest::RandomMatrix(src.size(), dim, rng);
  auto helper = vftest::RandomMatrix(tgt.size(), rng() % 5 + 2, rng);
  return {CharModel(src, merges), Vocabulary(tgt), std::move(source), std::move(helper)};
}

}  // namespace

TEST_CASE("assemble: pure copy and constant initializer") {
  EmbeddingMatrix source(3, 2, std::vector<float>{1, 0, 0, 1, 0.5f, 0.5f});
  auto never = [](TokenId) -> std::vector<float> {
    FAIL("initializer called");
    return {};
  };
  auto copy = Assemble(source, NonePartition(Vocabulary({"a", "b", "c"}), Vocabulary({"c", "a"})),
                       never, never);
  CHECK(copy.matrix.rows() == 2);
  CHECK(RowOf(copy.matrix, 0) == RowOf(source, 2));
  CHECK(RowOf(copy.matrix, 1) == RowOf(source, 0));
  CHECK(copy.report.initialized_count == 0);
  CHECK(copy.report.copied_count == 2);

  auto nine = [](TokenId) { return std::vector<float>{9, 9}; };
  auto out = Assemble(source, NonePartition(Vocabulary({"a", "b", "c"}), Vocabulary({"a", "z", "c"})),
                      nine, never);
  CHECK(RowOf(out.matrix, 1) == std::vector<float>{9, 9});
  CHECK(RowOf(out.matrix, 0) == RowOf(source, 0));
  CHECK(RowOf(out.matrix, 2) == RowOf(source, 2));
  CHECK(out.report.provenance[1] == Provenance::kHeuristic);
  CHECK(out.report.initialized_count == 1);
}

TEST_CASE("assemble: contract violations and fallback") {
  EmbeddingMatrix source(2, 2);
  auto p = NonePartition(Vocabulary({"a", "b", "c"}), Vocabulary({"a", "z"}));
  auto nine = [](TokenId) { return std::vector<float>{9, 9}; };
  CHECK_THROWS_AS(Assemble(source, p, nine, nine), Error);

  EmbeddingMatrix ok(3, 2);
  auto wrong_dim = [](TokenId) { return std::vector<float>{1, 2, 3}; };
  CHECK_THROWS_AS(Assemble(ok, p, wrong_dim, nine), Error);

  auto refuse = [](TokenId) -> std::vector<float> {
    throw Error(ErrorCode::kFallbackRequired, "no decomposition");
  };
  auto out = Assemble(ok, p, refuse, nine);
  CHECK(out.report.fallback_count == 1);
  CHECK(out.report.provenance[1] == Provenance::kFallback);
  CHECK(out.report.fallback_reasons.count(1) == 1);
  CHECK(RowOf(out.matrix, 1) == std::vector<float>{9, 9});
}

TEST_CASE("random rows: collapse, determinism, moments") {
  EmbeddingStats zero;
  zero.mean = {0.25, -3.0};
  zero.variance = {0.0, 0.0};
  CHECK(RandomRow(7, zero, 1) == std::vector<float>{0.25f, -3.0f});

  EmbeddingStats unit;
  unit.mean = {0.0};
  unit.variance = {1.0};
  CHECK(RandomRow(5, unit, 9) == RandomRow(5, unit, 9));
  CHECK(RandomRow(5, unit, 9) != RandomRow(5, unit, 10));

  std::vector<double> samples;
  for (TokenId id = 0; id < 10000; ++id) samples.push_back(RandomRow(id, unit, 42)[0]);
  double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / samples.size();
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= samples.size();
  CHECK(std::abs(mean) < 0.05);
  CHECK(std::abs(var - 1.0) < 0.05);

  // Per-dimension moments show through; scalar moments flatten them.
  EmbeddingStats skew;
  skew.mean = {10.0, -10.0};
  skew.variance = {4.0, 0.01};
  skew.scalar_mean = 0.0;
  skew.scalar_variance = 1.0;
  double d0 = 0, d1 = 0, s0 = 0;
  for (TokenId id = 0; id < 2000; ++id) {
    auto r = RandomRow(id, skew, 3);
    d0 += r[0];
    d1 += r[1];
    s0 += RandomRow(id, skew, 3, RandomMoments::kScalar)[0];
  }
  CHECK(std::abs(d0 / 2000 - 10.0) < 0.2);
  CHECK(std::abs(d1 / 2000 + 10.0) < 0.05);
  CHECK(std::abs(s0 / 2000) < 0.1);
}

TEST_CASE("fvt: casa averages ca and sa") {
  auto model = CharModel({"c", "a", "s", "ca", "sa"}, {{"c", "a"}, {"s", "a"}});
  EmbeddingMatrix source(5, 2, std::vector<float>{7, 7, 7, 7, 7, 7, 1, 0, 0, 1});
  CHECK(FvtRow("casa", MarkerConvention::kNone, model, source) == std::vector<float>{0.5f, 0.5f});
  CHECK(FvtRow("ca", MarkerConvention::kNone, model, source) == RowOf(source, 3));
}

TEST_CASE("fvt: word-initial pieces keep their boundary") {
  // Source metaspace, target byte-level: "Ġcasa" must reach the source as "▁casa".
  auto source_tok = vftest::MetaSpaceModel(
      {"\xE2\x96\x81", "c", "a", "s", "\xE2\x96\x81" "c", "\xE2\x96\x81" "ca", "sa"},
      {{"\xE2\x96\x81", "c"}, {"\xE2\x96\x81" "c", "a"}, {"s", "a"}});
  auto ids = FvtDecomposition("\xC4\xA0" "casa", MarkerConvention::kByteMarker, source_tok);
  REQUIRE(ids.size() == 2);
  CHECK(source_tok.vocab().Piece(ids[0]) == "\xE2\x96\x81" "ca");
  CHECK(source_tok.vocab().Piece(ids[1]) == "sa");
  ids = FvtDecomposition("casa", MarkerConvention::kByteMarker, source_tok);
  CHECK(source_tok.vocab().Piece(ids[0]) == "c");

  // Byte-fallback target pieces decompose to the raw byte.
  ids = FvtDecomposition("<0xC3>", MarkerConvention::kMetaSpace, source_tok);
  REQUIRE(ids.size() == 1);
  CHECK(source_tok.vocab().Piece(ids[0]) == "<0xC3>");
}

TEST_CASE("fvt: unknown-only decompositions request fallback") {
  TokenizerOptions options;
  options.marker = MarkerConvention::kNone;
  options.unk_token = "<unk>";
  TokenizerModel model(Vocabulary({"<unk>", "a"}), {}, options);
  EmbeddingMatrix source(2, 1);
  try {
    FvtRow("zz", MarkerConvention::kNone, model, source);
    FAIL("expected fallback");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFallbackRequired);
  }
  CHECK_THROWS_AS(FvtRow("q", MarkerConvention::kNone, CharModel({"a"}), source), Error);
}

TEST_CASE("fvt: brute-force mean over random 5-piece splits") {
  std::mt19937_64 rng(31);
  std::vector<std::string> letters;
  for (char c = 'a'; c <= 'z'; ++c) letters.emplace_back(1, c);
  auto model = CharModel(letters);
  for (int trial = 0; trial < 100; ++trial) {
    auto source = vftest::RandomMatrix(26, 6, rng, 5.0);
    std::string piece;
    std::vector<std::size_t> rows;
    for (int i = 0; i < 5; ++i) {
      rows.push_back(rng() % 26);
      piece.push_back(static_cast<char>('a' + rows.back()));
    }
    auto got = FvtRow(piece, MarkerConvention::kNone, model, source);
    for (std::size_t k = 0; k < 6; ++k) {
      long double sum = 0;
      for (auto r : rows) sum += source.Row(r)[k];
      CHECK(std::abs(static_cast<double>(sum / 5) - got[k]) <=
            1e-7 * std::max(1.0, std::abs(static_cast<double>(got[k]))));
    }
    std::string shuffled = piece;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(vftest::MaxAbsDiff(FvtRow(shuffled, MarkerConvention::kNone, model, source), got) <=
          1e-6);
  }
}

TEST_CASE("clp: one-hot and midpoint geometry") {
  // Shared tokens a, b, c; novel tokens x (equal to b) and y (between a and b).
  Vocabulary sv({"a", "b", "c"});
  Vocabulary tv({"a", "b", "c", "x", "y"});
  auto p = NonePartition(sv, tv);
  EmbeddingMatrix source(3, 2, std::vector<float>{1, 2, -3, 4, 100, 100});
  const float h = 0.70710678f;
  EmbeddingMatrix helper(5, 3, std::vector<float>{1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, h, h, 0});
  ClpContext ctx(helper, p);

  CHECK(ClpRow(3, source, p, ctx, 1, NegativePolicy::kClampZero) == RowOf(source, 1));
  auto mid = ClpRow(4, source, p, ctx, 0, NegativePolicy::kClampZero);
  CHECK(mid[0] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(mid[1] == doctest::Approx(3.0).epsilon(1e-6));
  auto w = ctx.Weights(4, 0, NegativePolicy::kClampZero);
  REQUIRE(w.size() == 2);
  CHECK(w[0].weight == doctest::Approx(0.5));
}

TEST_CASE("clp: degenerate and zero-norm cases") {
  Vocabulary sv({"a", "b"});
  Vocabulary tv({"a", "b", "x", "z"});
  auto p = NonePartition(sv, tv);
  EmbeddingMatrix helper(4, 2, std::vector<float>{1, 0, 0, 1, -1, -1, 0, 0});
  ClpContext ctx(helper, p);
  auto code = [&](TokenId id, NegativePolicy policy) {
    try {
      ctx.Weights(id, 0, policy);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  CHECK(code(2, NegativePolicy::kClampZero) == ErrorCode::kDegenerateSimilarity);
  CHECK(code(3, NegativePolicy::kClampZero) == ErrorCode::kZeroNormEmbedding);
  auto abs = ctx.Weights(2, 0, NegativePolicy::kAbsolute);
  CHECK(abs.size() == 2);
  CHECK(abs[0].weight == doctest::Approx(0.5));
  // Equal cosines: shift-min zeroes everything.
  CHECK(code(2, NegativePolicy::kShiftMin) == ErrorCode::kDegenerateSimilarity);
}

TEST_CASE("clp: normalization and convexity over random instances") {
  std::mt19937_64 rng(41);
  int instances = 0;
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t shared = rng() % 10 + 1;
    std::vector<std::string> sv, tv;
    for (std::size_t i = 0; i < shared; ++i) sv.push_back("s" + std::to_string(i));
    tv = sv;
    for (std::size_t i = 0, n = rng() % 6 + 1; i < n; ++i) tv.push_back("n" + std::to_string(i));
    auto p = NonePartition(Vocabulary(sv), Vocabulary(tv));
    auto source = vftest::RandomMatrix(sv.size(), 4, rng);
    auto helper = vftest::RandomMatrix(tv.size(), 3, rng);
    ClpContext ctx(helper, p);
    std::size_t top_k = rng() % 3 == 0 ? rng() % shared + 1 : 0;
    for (const auto& novel : p.novel) {
      for (auto policy : {NegativePolicy::kClampZero, NegativePolicy::kShiftMin,
                          NegativePolicy::kAbsolute}) {
        std::vector<ClpContext::Weight> w;
        try {
          w = ctx.Weights(novel.target_id, top_k, policy);
        } catch (const Error& e) {
          CHECK(e.code() == ErrorCode::kDegenerateSimilarity);
          continue;
        }
        double total = 0;
        for (const auto& x : w) {
          CHECK(x.weight > 0.0);
          total += x.weight;
        }
        CHECK(std::abs(total - 1.0) < 1e-6);
        if (top_k > 0) CHECK(w.size() <= top_k);
        if (policy != NegativePolicy::kClampZero) continue;
        auto row = ClpRow(novel.target_id, source, p, ctx, top_k, policy);
        for (std::size_t k = 0; k < 4; ++k) {
          float lo = source.Row(0)[k], hi = lo;
          for (std::size_t r = 0; r < source.rows(); ++r) {
            lo = std::min(lo, source.Row(r)[k]);
            hi = std::max(hi, source.Row(r)[k]);
          }
          CHECK(row[k] >= lo - 1e-5f);
          CHECK(row[k] <= hi + 1e-5f);
        }
      }
    }
    ++instances;
  }
  CHECK(instances >= 100);
}

TEST_CASE("sava: identity map, dimension check, 2x fixture") {
  std::mt19937_64 rng(51);
  auto helper = vftest::RandomMatrix(4, 3, rng);
  AffineMap id = AffineMap::Identity(3);
  CHECK(SavaRow(2, helper, id) == RowOf(helper, 2));
  auto wide = vftest::RandomMatrix(4, 8, rng);
  CHECK_THROWS_AS(SavaRow(0, wide, AffineMap::Identity(16)), Error);

  // Source rows are exactly twice the helper rows on shared tokens.
  const std::size_t shared = 256, novel = 32, dim = 6;
  std::vector<std::string> sv, tv;
  for (std::size_t i = 0; i < shared; ++i) sv.push_back("s" + std::to_string(i));
  tv = sv;
  for (std::size_t i = 0; i < novel; ++i) tv.push_back("n" + std::to_string(i));
  auto target_helper = vftest::RandomMatrix(tv.size(), dim, rng);
  EmbeddingMatrix source(shared, dim);
  for (std::size_t r = 0; r < shared; ++r) {
    for (std::size_t k = 0; k < dim; ++k) source.MutableRow(r)[k] = 2.0f * target_helper.Row(r)[k];
  }
  HeuristicConfig cfg;
  cfg.method = Method::kSava;
  cfg.train.steps = 4000;
  auto source_tok = CharModel(sv);
  auto result = AdaptWithPartition(source, NonePartition(Vocabulary(sv), Vocabulary(tv)),
                                   source_tok, MarkerConvention::kNone, &target_helper, cfg);
  REQUIRE(result.report.fit);
  double worst = 0;
  for (std::size_t i = shared; i < tv.size(); ++i) {
    for (std::size_t k = 0; k < dim; ++k) {
      worst = std::max(worst, std::abs(result.matrix.Row(i)[k] - 2.0 * target_helper.Row(i)[k]));
    }
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("adapt: bookkeeping and preconditions") {
  auto source_tok = CharModel({"a", "b", "c"});
  auto target_tok = CharModel({"b", "c", "bc", "ca"});
  EmbeddingMatrix source(3, 2, std::vector<float>{1, 0, 0, 1, 2, 2});
  HeuristicConfig cfg;
  cfg.method = Method::kFvt;
  auto r = Adapt(source, source_tok, target_tok, nullptr, cfg);
  CHECK(r.report.copied_count == 2);
  CHECK(r.report.initialized_count == 2);
  CHECK(r.report.fallback_count == 0);
  CHECK(RowOf(r.matrix, 2) == std::vector<float>{1.0f, 1.5f});
  CHECK(RowOf(r.matrix, 3) == std::vector<float>{1.5f, 1.0f});

  cfg.method = Method::kClp;
  try {
    Adapt(source, source_tok, target_tok, nullptr, cfg);
    FAIL("expected precondition error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPrecondition);
    CHECK(std::string(e.what()).find("helper") != std::string::npos);
  }
  EmbeddingMatrix short_helper(2, 2);
  CHECK_THROWS_AS(Adapt(source, source_tok, target_tok, &short_helper, cfg), Error);
}

TEST_CASE("intersection preservation and shape for every method") {
  std::mt19937_64 rng(61);
  const Method methods[] = {Method::kRandom, Method::kFvt, Method::kClp, Method::kSava};
  int instances = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Instance inst = RandomInstance(rng);
    auto p = NonePartition(inst.source_tok.vocab(), inst.target);
    for (Method method : methods) {
      if (method == Method::kSava && p.shared.size() < 2) continue;
      HeuristicConfig cfg;
      cfg.method = method;
      cfg.seed = trial;
      cfg.train.steps = 25;
      cfg.clp_top_k = trial % 3;
      auto r = AdaptWithPartition(inst.source, p, inst.source_tok, MarkerConvention::kNone,
                                  &inst.helper, cfg);
      CHECK(r.matrix.rows() == inst.target.size());
      CHECK(r.matrix.dim() == inst.source.dim());
      CHECK(r.matrix.AllFinite());
      CHECK(r.report.copied_count == p.shared.size());
      CHECK(r.report.copied_count + r.report.initialized_count + r.report.fallback_count ==
            inst.target.size());
      for (const auto& s : p.shared) {
        CHECK(RowOf(r.matrix, s.target_id) == RowOf(inst.source, s.source_id));
      }
      if (method == Method::kFvt) {
        // Single-token decompositions are exact copies.
        for (const auto& n : p.novel) {
          auto ids = FvtDecomposition(n.piece, MarkerConvention::kNone, inst.source_tok);
          if (ids.size() == 1) CHECK(RowOf(r.matrix, n.target_id) == RowOf(inst.source, ids[0]));
        }
      }
    }
    ++instances;
  }
  CHECK(instances >= 100);
}

TEST_CASE("results do not depend on thread count") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    Instance inst = RandomInstance(rng);
    for (Method method : {Method::kRandom, Method::kFvt, Method::kClp}) {
      HeuristicConfig cfg;
      cfg.method = method;
      cfg.seed = 1234;
      cfg.threads = 1;
      auto serial = Adapt(inst.source, inst.source_tok, CharModel(inst.target.pieces()),
                          &inst.helper, cfg);
      cfg.threads = 4;
      auto parallel = Adapt(inst.source, inst.source_tok, CharModel(inst.target.pieces()),
                            &inst.helper, cfg);
      CHECK(serial.matrix == parallel.matrix);
    }
  }
}

TEST_CASE("mean-row fallback") {
  TokenizerOptions options;
  options.marker = MarkerConvention::kNone;
  options.unk_token = "<unk>";
  TokenizerModel source_tok(Vocabulary({"<unk>", "a"}), {}, options);
  EmbeddingMatrix source(2, 1, std::vector<float>{2, 4});
  HeuristicConfig cfg;
  cfg.fallback = FallbackKind::kMeanRow;
  auto r = Adapt(source, source_tok, CharModel({"a", "q"}), nullptr, cfg);
  CHECK(r.report.fallback_count == 1);
  CHECK(RowOf(r.matrix, 1) == std::vector<float>{3});
}
