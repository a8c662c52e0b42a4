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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace vocabforge {

using TokenId = std::uint32_t;

// Bijection between token strings and the contiguous id range [0, size).
class Vocabulary {
 public:
  Vocabulary() = default;
  // Piece i gets id i. Throws MalformedVocab on duplicate strings.
  explicit Vocabulary(std::vector<std::string> pieces);
  // Throws MalformedVocab on duplicate ids, negative ids, or gaps.
  static Vocabulary FromEntries(std::vector<std::pair<std::string, std::int64_t>> entries);

  std::size_t size() const { return pieces_.size(); }
  const std::string& Piece(TokenId id) const { return pieces_.at(id); }
  std::optional<TokenId> Find(std::string_view piece) const;
  bool Contains(std::string_view piece) const { return Find(piece).has_value(); }
  const std::vector<std::string>& pieces() const { return pieces_; }

 private:
  std::vector<std::string> pieces_;
  std::unordered_map<std::string, TokenId> index_;
};

// How a vocabulary marks word-initial pieces.
//   kMetaSpace:  "▁casa" (SentencePiece); spaces become U+2581.
//   kByteMarker: "Ġcasa" (GPT-2 byte level); every byte maps to a printable
//                code point, so this convention implies byte-level encoding.
//   kNone:       spaces are ordinary characters.
enum class MarkerConvention { kMetaSpace, kByteMarker, kNone };

std::string_view MarkerName(MarkerConvention m);
std::string_view MarkerString(MarkerConvention m);
// Accepts "meta-space", "byte-marker", "none". Throws InvalidArgument.
MarkerConvention ParseMarker(std::string_view name);
// Majority vote over pieces starting with "▁" vs "Ġ".
MarkerConvention DetectMarker(const Vocabulary& vocab);

// Piece -> plain UTF-8 bytes with word boundaries as leading spaces.
std::string PieceToSurface(std::string_view piece, MarkerConvention from);
std::string SurfaceToPiece(std::string_view surface, MarkerConvention to);
std::string Canonicalize(std::string_view piece, MarkerConvention from, MarkerConvention to);

struct TokenizerOptions {
  MarkerConvention marker = MarkerConvention::kMetaSpace;
  // Prepend a word boundary to encoded text. Defaults to true for meta-space.
  std::optional<bool> add_prefix_space;
  // Used for symbols outside the vocabulary when no byte fallback exists.
  std::optional<std::string> unk_token;
  // Map unknown characters to "<0xNN>" pieces when all 256 are present.
  bool byte_fallback = true;
};

struct EncodeOptions {
  std::optional<bool> add_prefix_space;
};

struct MergeRule {
  std::string left;
  std::string right;
};

class TokenizerModel {
 public:
  // Throws UnknownMergeSymbol when a merge input or output is not in vocab.
  TokenizerModel(Vocabulary vocab, std::vector<MergeRule> merges, TokenizerOptions options = {});

  const Vocabulary& vocab() const { return vocab_; }
  const std::vector<MergeRule>& merges() const { return merges_; }
  MarkerConvention marker() const { return options_.marker; }
  bool byte_level() const { return options_.marker == MarkerConvention::kByteMarker; }
  bool has_byte_fallback() const { return byte_fallback_; }
  bool add_prefix_space() const { return add_prefix_space_; }
  std::optional<TokenId> unk_id() const { return unk_id_; }

  // Greedy lowest-rank-first BPE within word chunks. Throws UnencodableInput
  // for characters with neither a vocabulary entry, byte fallback, nor unk.
  std::vector<TokenId> Encode(std::string_view text, EncodeOptions options = {}) const;
  // Inverse of Encode for text over the model alphabet.
  std::string Decode(std::span<const TokenId> ids, EncodeOptions options = {}) const;

 private:
  void EncodeChunk(std::string_view chunk, std::vector<TokenId>& out) const;

  Vocabulary vocab_;
  std::vector<MergeRule> merges_;
  TokenizerOptions options_;
  bool add_prefix_space_ = false;
  bool byte_fallback_ = false;
  std::optional<TokenId> unk_id_;
  std::array<TokenId, 256> byte_ids_{};
  // (left id << 32 | right id) -> (rank, merged id)
  std::unordered_map<std::uint64_t, std::pair<std::uint32_t, TokenId>> merge_table_;
};

Vocabulary ParseVocabJson(std::string_view json_text);
// One merge per line, two space-separated symbols; '#' lines are comments.
std::vector<MergeRule> ParseMerges(std::string_view text);

// vocab-json + merges-txt pair. An empty merges path means no merges.
TokenizerModel LoadTokenizer(const std::filesystem::path& vocab_path,
                             const std::filesystem::path& merges_path,
                             std::optional<MarkerConvention> marker = std::nullopt);
// Hugging Face tokenizer.json with a BPE model.
TokenizerModel LoadHfTokenizer(const std::filesystem::path& path,
                               std::optional<MarkerConvention> marker = std::nullopt);
// Vocabulary only, from either a vocab JSON or a tokenizer.json.
Vocabulary LoadVocabulary(const std::filesystem::path& path);

struct SharedToken {
  std::string piece;  // target spelling
  TokenId source_id;
  TokenId target_id;
};

struct NovelToken {
  std::string piece;
  TokenId target_id;
};

struct TokenPartition {
  std::vector<SharedToken> shared;
  std::vector<NovelToken> novel;
  std::size_t source_size = 0;
  std::size_t target_size = 0;
  // "canonical" when pieces were matched after marker translation, "exact"
  // when matched verbatim.
  std::string mode;
  MarkerConvention source_marker = MarkerConvention::kNone;
  MarkerConvention target_marker = MarkerConvention::kNone;
  std::size_t collision_count = 0;
  std::vector<std::string> warnings;
};

struct MarkerMap {
  MarkerConvention source = MarkerConvention::kMetaSpace;
  MarkerConvention target = MarkerConvention::kByteMarker;
  bool canonicalize = true;
};

TokenPartition Partition(const Vocabulary& source, const Vocabulary& target,
                         const MarkerMap& markers);

// Throws PartitionInconsistent unless the partition covers every target id
// exactly once and all ids lie inside the given vocabulary sizes.
void ValidatePartition(const TokenPartition& partition, std::size_t source_size,
                       std::size_t target_size);

}  // namespace vocabforge
