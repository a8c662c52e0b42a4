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

#include "vocabforge/report.hpp"

#include "vocabforge/error.hpp"

namespace vocabforge {

namespace {

constexpr std::size_t kMaxWarnings = 20;

}  // namespace

Json PartitionToJson(const TokenPartition& partition, bool with_tokens) {
  Json j;
  j["mode"] = partition.mode;
  j["source_marker"] = MarkerName(partition.source_marker);
  j["target_marker"] = MarkerName(partition.target_marker);
  j["source_size"] = partition.source_size;
  j["target_size"] = partition.target_size;
  j["shared_count"] = partition.shared.size();
  j["novel_count"] = partition.novel.size();
  j["collisions"] = partition.collision_count;
  Json warnings = Json::array();
  for (std::size_t i = 0; i < partition.warnings.size() && i < kMaxWarnings; ++i) {
    warnings.push_back(partition.warnings[i]);
  }
  j["warnings"] = std::move(warnings);
  if (with_tokens) {
    Json shared = Json::array();
    for (const auto& s : partition.shared) shared.push_back(Json::array({s.piece, s.source_id, s.target_id}));
    Json novel = Json::array();
    for (const auto& n : partition.novel) novel.push_back(Json::array({n.piece, n.target_id}));
    j["shared"] = std::move(shared);
    j["novel"] = std::move(novel);
  }
  return j;
}

TokenPartition PartitionFromJson(const nlohmann::json& doc) {
  const nlohmann::json& j = doc.contains("partition") ? doc["partition"] : doc;
  if (!j.contains("shared") || !j.contains("novel")) {
    throw Error(ErrorCode::kPartitionInconsistent,
                "partition file lacks shared/novel listings (write it with `intersect --out`)");
  }
  TokenPartition p;
  try {
    p.mode = j.value("mode", "canonical");
    p.source_marker = ParseMarker(j.value("source_marker", "none"));
    p.target_marker = ParseMarker(j.value("target_marker", "none"));
    p.source_size = j.at("source_size").get<std::size_t>();
    p.target_size = j.at("target_size").get<std::size_t>();
    p.collision_count = j.value("collisions", std::size_t{0});
    for (const auto& s : j["shared"]) {
      p.shared.push_back({s.at(0).get<std::string>(), s.at(1).get<TokenId>(), s.at(2).get<TokenId>()});
    }
    for (const auto& n : j["novel"]) {
      p.novel.push_back({n.at(0).get<std::string>(), n.at(1).get<TokenId>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kPartitionInconsistent, std::string("bad partition file: ") + e.what());
  }
  ValidatePartition(p, p.source_size, p.target_size);
  return p;
}

Json StatsToJson(const EmbeddingStats& stats) {
  Json j;
  j["rows"] = stats.rows;
  j["dim"] = stats.mean.size();
  j["scalar_mean"] = stats.scalar_mean;
  j["scalar_variance"] = stats.scalar_variance;
  j["mean"] = stats.mean;
  j["variance"] = stats.variance;
  return j;
}

Json FitReportToJson(const FitReport& report) {
  Json j;
  j["pair_count"] = report.pair_count;
  j["initial_mse"] = report.initial_mse;
  j["final_mse"] = report.final_mse;
  j["loss_increased"] = report.loss_increased;
  j["oracle_mse"] = report.oracle_mse ? Json(*report.oracle_mse) : Json();
  j["frobenius_gap_to_oracle"] =
      report.frobenius_gap_to_oracle ? Json(*report.frobenius_gap_to_oracle) : Json();
  j["loss_curve"] = report.loss_curve;
  return j;
}

Json HeuristicConfigToJson(const HeuristicConfig& config) {
  Json j;
  j["method"] = MethodName(config.method);
  j["seed"] = config.seed;
  j["clp_top_k"] = config.clp_top_k;
  j["clp_negative_policy"] = NegativePolicyName(config.clp_negative_policy);
  j["random_moments"] = RandomMomentsName(config.random_moments);
  j["fallback"] = FallbackName(config.fallback);
  if (config.method == Method::kSava) {
    j["steps"] = config.train.steps;
    j["learning_rate"] = config.train.learning_rate;
    j["l2_normalize_inputs"] = config.train.l2_normalize_inputs;
    j["pair_limit"] = config.sava_pair_limit ? Json(*config.sava_pair_limit) : Json();
  }
  return j;
}

Json AdaptationReportToJson(const AdaptationReport& report, bool per_token) {
  Json j;
  j["copied_count"] = report.copied_count;
  j["initialized_count"] = report.initialized_count;
  j["fallback_count"] = report.fallback_count;
  j["partition_collisions"] = report.partition_collisions;
  j["method"] = HeuristicConfigToJson(report.config);
  if (report.fit) j["fit"] = FitReportToJson(*report.fit);
  Json reasons = Json::object();
  for (const auto& [id, why] : report.fallback_reasons) reasons[std::to_string(id)] = why;
  j["fallback_reasons"] = std::move(reasons);
  if (per_token) {
    Json tokens = Json::array();
    for (std::size_t id = 0; id < report.provenance.size(); ++id) {
      tokens.push_back(Json::array({id, ProvenanceName(report.provenance[id])}));
    }
    j["per_token"] = std::move(tokens);
  }
  j["timing_seconds"] = report.timing_seconds;
  return j;
}

Json FertilityToJson(const FertilityReport& report) {
  Json j;
  j["corpus_label"] = report.corpus_label;
  j["tokenizer_label"] = report.tokenizer_label;
  j["document_count"] = report.document_count;
  j["word_count"] = report.word_count;
  j["token_count"] = report.token_count;
  j["fertility"] = report.fertility;
  if (!report.per_document.empty()) {
    Json docs = Json::array();
    for (const auto& [words, tokens] : report.per_document) {
      Json d;
      d["words"] = words;
      d["tokens"] = tokens;
      d["fertility"] = words > 0 ? Json(static_cast<double>(tokens) / static_cast<double>(words))
                                 : Json();
      docs.push_back(std::move(d));
    }
    j["per_document"] = std::move(docs);
  }
  return j;
}

Json SimilarityToJson(const SimilarityScore& score) {
  Json j;
  j["score"] = score.score;
  j["anchor_count"] = score.anchor_count;
  j["token_count"] = score.token_count;
  j["seed"] = score.seed;
  j["anchor_ids"] = score.anchor_ids;
  return j;
}

Json ParamReportToJson(const ParamCountReport& r) {
  Json j;
  j["vocab_before"] = r.vocab_before;
  j["vocab_after"] = r.vocab_after;
  j["dim"] = r.dim;
  j["tied"] = r.tied;
  j["non_embedding_params"] = r.non_embedding_params;
  j["total_before"] = r.total_before;
  j["total_after"] = r.total_after;
  j["delta"] = r.delta;
  j["total_before_billions"] = FormatBillions(r.total_before);
  j["total_after_billions"] = FormatBillions(r.total_after);
  const auto magnitude = static_cast<std::uint64_t>(r.delta < 0 ? -r.delta : r.delta);
  j["delta_billions"] = (r.delta < 0 ? "-" : "") + FormatBillions(magnitude);
  return j;
}

}  // namespace vocabforge
