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

#include <json.hpp>

#include "vocabforge/affine.hpp"
#include "vocabforge/analysis.hpp"
#include "vocabforge/embedding.hpp"
#include "vocabforge/heuristics.hpp"
#include "vocabforge/tokenizer.hpp"

namespace vocabforge {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

// `with_tokens` adds the shared/novel listings that fit-map reads back.
Json PartitionToJson(const TokenPartition& partition, bool with_tokens);
// Throws PartitionInconsistent when the listings are missing or malformed.
TokenPartition PartitionFromJson(const nlohmann::json& doc);

Json StatsToJson(const EmbeddingStats& stats);
Json FitReportToJson(const FitReport& report);
Json HeuristicConfigToJson(const HeuristicConfig& config);
Json AdaptationReportToJson(const AdaptationReport& report, bool per_token);
Json FertilityToJson(const FertilityReport& report);
Json SimilarityToJson(const SimilarityScore& score);
Json ParamReportToJson(const ParamCountReport& report);

}  // namespace vocabforge
