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

#include "vocabforge/tokenizer.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <unordered_set>

#include <json.hpp>

#include "vocabforge/error.hpp"
#include "vocabforge/io.hpp"
#include "vocabforge/text.hpp"

namespace vocabforge {

using nlohmann::json;

namespace {

constexpr TokenId kUnknownSymbol = std::numeric_limits<TokenId>::max();

std::uint64_t PairKey(TokenId left, TokenId right) {
  return (static_cast<std::uint64_t>(left) << 32) | right;
}

}  // namespace

// ---------------------------------------------------------------- Vocabulary

Vocabulary::Vocabulary(std::vector<std::string> pieces) : pieces_(std::move(pieces)) {
  index_.reserve(pieces_.size());
  for (TokenId id = 0; id < pieces_.size(); ++id) {
    if (!index_.emplace(pieces_[id], id).second) {
      throw Error(ErrorCode::kMalformedVocab, "duplicate token string '" + pieces_[id] + "'");
    }
  }
}

Vocabulary Vocabulary::FromEntries(std::vector<std::pair<std::string, std::int64_t>> entries) {
  const auto n = static_cast<std::int64_t>(entries.size());
  std::vector<std::string> pieces(entries.size());
  std::vector<bool> seen(entries.size(), false);
  for (auto& [piece, id] : entries) {
    if (id < 0 || id >= n) {
      throw Error(ErrorCode::kMalformedVocab,
                  "id " + std::to_string(id) + " for '" + piece + "' outside [0, " +
                      std::to_string(n) + ")");
    }
    if (seen[id]) throw Error(ErrorCode::kMalformedVocab, "duplicate id " + std::to_string(id));
    seen[id] = true;
    pieces[id] = std::move(piece);
  }
  return Vocabulary(std::move(pieces));
}

std::optional<TokenId> Vocabulary::Find(std::string_view piece) const {
  auto it = index_.find(std::string(piece));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ----------------------------------------------------------------- Markers

std::string_view MarkerName(MarkerConvention m) {
  switch (m) {
    case MarkerConvention::kMetaSpace: return "meta-space";
    case MarkerConvention::kByteMarker: return "byte-marker";
    case MarkerConvention::kNone: return "none";
  }
  return "none";
}

std::string_view MarkerString(MarkerConvention m) {
  switch (m) {
    case MarkerConvention::kMetaSpace: return text::kMetaSpace;
    case MarkerConvention::kByteMarker: return text::kByteSpace;
    case MarkerConvention::kNone: return " ";
  }
  return " ";
}

MarkerConvention ParseMarker(std::string_view name) {
  if (name == "meta-space" || name == "leading-meta-space") return MarkerConvention::kMetaSpace;
  if (name == "byte-marker" || name == "leading-byte-marker") return MarkerConvention::kByteMarker;
  if (name == "none") return MarkerConvention::kNone;
  throw Error(ErrorCode::kInvalidArgument, "unknown marker convention '" + std::string(name) + "'");
}

MarkerConvention DetectMarker(const Vocabulary& vocab) {
  std::size_t meta = 0;
  std::size_t byte = 0;
  for (const auto& piece : vocab.pieces()) {
    if (piece.starts_with(text::kMetaSpace)) ++meta;
    if (piece.starts_with(text::kByteSpace)) ++byte;
  }
  if (meta == 0 && byte == 0) return MarkerConvention::kNone;
  return meta >= byte ? MarkerConvention::kMetaSpace : MarkerConvention::kByteMarker;
}

std::string PieceToSurface(std::string_view piece, MarkerConvention from) {
  switch (from) {
    case MarkerConvention::kMetaSpace:
      return text::ReplaceAll(piece, text::kMetaSpace, " ");
    case MarkerConvention::kByteMarker: {
      auto decoded = text::ByteLevelDecode(piece);
      return decoded ? *decoded : std::string(piece);
    }
    case MarkerConvention::kNone:
      break;
  }
  return std::string(piece);
}

std::string SurfaceToPiece(std::string_view surface, MarkerConvention to) {
  switch (to) {
    case MarkerConvention::kMetaSpace:
      return text::ReplaceAll(surface, " ", text::kMetaSpace);
    case MarkerConvention::kByteMarker:
      return text::ByteLevelEncode(surface);
    case MarkerConvention::kNone:
      break;
  }
  return std::string(surface);
}

std::string Canonicalize(std::string_view piece, MarkerConvention from, MarkerConvention to) {
  if (from == to) return std::string(piece);
  return SurfaceToPiece(PieceToSurface(piece, from), to);
}

// ---------------------------------------------------------- TokenizerModel

TokenizerModel::TokenizerModel(Vocabulary vocab, std::vector<MergeRule> merges,
                               TokenizerOptions options)
    : vocab_(std::move(vocab)), merges_(std::move(merges)), options_(std::move(options)) {
  add_prefix_space_ =
      options_.add_prefix_space.value_or(options_.marker == MarkerConvention::kMetaSpace);

  merge_table_.reserve(merges_.size());
  for (std::uint32_t rank = 0; rank < merges_.size(); ++rank) {
    const auto& rule = merges_[rank];
    auto left = vocab_.Find(rule.left);
    auto right = vocab_.Find(rule.right);
    auto merged = vocab_.Find(rule.left + rule.right);
    if (!left || !right || !merged) {
      throw Error(ErrorCode::kUnknownMergeSymbol,
                  "merge #" + std::to_string(rank) + " '" + rule.left + " " + rule.right +
                      "' references a symbol outside the vocabulary");
    }
    // A repeated pair keeps its first (lowest) rank.
    merge_table_.emplace(PairKey(*left, *right), std::make_pair(rank, *merged));
  }

  if (options_.byte_fallback) {
    byte_fallback_ = true;
    for (int b = 0; b < 256; ++b) {
      auto id = vocab_.Find(text::ByteFallbackPiece(static_cast<std::uint8_t>(b)));
      if (!id) {
        byte_fallback_ = false;
        break;
      }
      byte_ids_[b] = *id;
    }
  }
  if (options_.unk_token) unk_id_ = vocab_.Find(*options_.unk_token);
}

void TokenizerModel::EncodeChunk(std::string_view chunk, std::vector<TokenId>& out) const {
  auto chars = text::SplitChars(chunk);
  // Unknown symbols never merge, so each one keeps the index of its character.
  struct Symbol {
    TokenId id;
    std::uint32_t char_index;
  };
  std::vector<Symbol> symbols;
  symbols.reserve(chars.size());
  for (std::uint32_t i = 0; i < chars.size(); ++i) {
    symbols.push_back({vocab_.Find(chars[i]).value_or(kUnknownSymbol), i});
  }

  while (symbols.size() > 1) {
    std::uint32_t best_rank = std::numeric_limits<std::uint32_t>::max();
    TokenId best_left = 0, best_right = 0, best_merged = 0;
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      if (symbols[i].id == kUnknownSymbol || symbols[i + 1].id == kUnknownSymbol) continue;
      auto it = merge_table_.find(PairKey(symbols[i].id, symbols[i + 1].id));
      if (it != merge_table_.end() && it->second.first < best_rank) {
        best_rank = it->second.first;
        best_left = symbols[i].id;
        best_right = symbols[i + 1].id;
        best_merged = it->second.second;
      }
    }
    if (best_rank == std::numeric_limits<std::uint32_t>::max()) break;
    std::vector<Symbol> next;
    next.reserve(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      if (i + 1 < symbols.size() && symbols[i].id == best_left &&
          symbols[i + 1].id == best_right) {
        next.push_back({best_merged, symbols[i].char_index});
        ++i;
      } else {
        next.push_back(symbols[i]);
      }
    }
    symbols = std::move(next);
  }

  for (const auto& sym : symbols) {
    if (sym.id != kUnknownSymbol) {
      out.push_back(sym.id);
      continue;
    }
    std::string_view ch = chars[sym.char_index];
    if (byte_fallback_) {
      std::string raw(ch);
      if (byte_level()) raw = text::ByteLevelDecode(ch).value_or(raw);
      for (char b : raw) out.push_back(byte_ids_[static_cast<unsigned char>(b)]);
    } else if (unk_id_) {
      out.push_back(*unk_id_);
    } else {
      throw Error(ErrorCode::kUnencodableInput,
                  "character '" + std::string(ch) + "' is outside the vocabulary alphabet");
    }
  }
}

std::vector<TokenId> TokenizerModel::Encode(std::string_view input, EncodeOptions options) const {
  std::vector<TokenId> ids;
  if (input.empty()) return ids;
  bool prefix = options.add_prefix_space.value_or(add_prefix_space_);
  std::string surface = prefix ? " " + std::string(input) : std::string(input);
  std::string symbols = SurfaceToPiece(surface, options_.marker);
  std::string_view marker = MarkerString(options_.marker);

  std::string_view rest = symbols;
  ids.reserve(rest.size() / 2);
  while (!rest.empty()) {
    std::size_t next = rest.find(marker, rest.starts_with(marker) ? marker.size() : 0);
    std::string_view chunk = rest.substr(0, next);
    EncodeChunk(chunk, ids);
    if (next == std::string_view::npos) break;
    rest.remove_prefix(next);
  }
  return ids;
}

std::string TokenizerModel::Decode(std::span<const TokenId> ids, EncodeOptions options) const {
  std::string joined;
  for (TokenId id : ids) {
    const std::string& piece = vocab_.Piece(id);
    if (byte_fallback_) {
      if (auto b = text::ParseByteFallback(piece)) {
        char c = static_cast<char>(*b);
        // Byte-level pieces are re-encoded so the final decode sees one alphabet.
        if (byte_level()) {
          joined += text::ByteLevelEncode(std::string_view(&c, 1));
        } else {
          joined.push_back(c);
        }
        continue;
      }
    }
    joined += piece;
  }
  std::string surface = PieceToSurface(joined, options_.marker);
  bool prefix = options.add_prefix_space.value_or(add_prefix_space_);
  if (prefix && surface.starts_with(' ')) surface.erase(0, 1);
  return surface;
}

// -------------------------------------------------------------- Loading

Vocabulary ParseVocabJson(std::string_view json_text) {
  std::unordered_set<std::string> keys;
  json::parser_callback_t on_event = [&](int depth, json::parse_event_t event, json& parsed) {
    if (depth == 1 && event == json::parse_event_t::key) {
      auto key = parsed.get<std::string>();
      if (!keys.insert(key).second) {
        throw Error(ErrorCode::kMalformedVocab, "duplicate token string '" + key + "'");
      }
    }
    return true;
  };
  json doc;
  try {
    doc = json::parse(json_text, on_event);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedVocab, std::string("invalid vocab JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kMalformedVocab, "vocab JSON must be an object");
  std::vector<std::pair<std::string, std::int64_t>> entries;
  entries.reserve(doc.size());
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it.value().is_number_integer()) {
      throw Error(ErrorCode::kMalformedVocab, "id for '" + it.key() + "' is not an integer");
    }
    entries.emplace_back(it.key(), it.value().get<std::int64_t>());
  }
  return Vocabulary::FromEntries(std::move(entries));
}

std::vector<MergeRule> ParseMerges(std::string_view contents) {
  std::vector<MergeRule> merges;
  std::size_t line_no = 0;
  while (!contents.empty()) {
    std::size_t eol = contents.find('\n');
    std::string_view line = contents.substr(0, eol);
    contents.remove_prefix(eol == std::string_view::npos ? contents.size() : eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::size_t sp = line.find(' ');
    if (sp == std::string_view::npos || sp == 0 || sp + 1 >= line.size() ||
        line.find(' ', sp + 1) != std::string_view::npos) {
      throw Error(ErrorCode::kUnknownMergeSymbol,
                  "merges line " + std::to_string(line_no) + " is not two symbols: '" +
                      std::string(line) + "'");
    }
    merges.push_back({std::string(line.substr(0, sp)), std::string(line.substr(sp + 1))});
  }
  return merges;
}

namespace {

std::optional<std::string> DefaultUnk(const Vocabulary& vocab) {
  for (const char* candidate : {"<unk>", "<|unk|>", "[UNK]"}) {
    if (vocab.Contains(candidate)) return std::string(candidate);
  }
  return std::nullopt;
}

}  // namespace

TokenizerModel LoadTokenizer(const std::filesystem::path& vocab_path,
                             const std::filesystem::path& merges_path,
                             std::optional<MarkerConvention> marker) {
  if (vocab_path.filename() == "tokenizer.json") return LoadHfTokenizer(vocab_path, marker);
  Vocabulary vocab = ParseVocabJson(ReadFile(vocab_path));
  std::vector<MergeRule> merges;
  if (!merges_path.empty()) merges = ParseMerges(ReadFile(merges_path));
  TokenizerOptions options;
  options.marker = marker.value_or(DetectMarker(vocab));
  options.unk_token = DefaultUnk(vocab);
  return TokenizerModel(std::move(vocab), std::move(merges), std::move(options));
}

namespace {

struct HfParts {
  Vocabulary vocab;
  json doc;
};

HfParts ParseHf(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(ReadFile(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedVocab, path.string() + ": " + e.what());
  }
  if (!doc.contains("model") || !doc["model"].contains("vocab")) {
    throw Error(ErrorCode::kMalformedVocab, path.string() + ": missing model.vocab");
  }
  std::map<std::int64_t, std::string> by_id;
  std::unordered_set<std::string> seen;
  for (auto it = doc["model"]["vocab"].begin(); it != doc["model"]["vocab"].end(); ++it) {
    auto id = it.value().get<std::int64_t>();
    if (!by_id.emplace(id, it.key()).second) {
      throw Error(ErrorCode::kMalformedVocab, "duplicate id " + std::to_string(id));
    }
    seen.insert(it.key());
  }
  if (doc.contains("added_tokens")) {
    for (const auto& tok : doc["added_tokens"]) {
      auto id = tok.at("id").get<std::int64_t>();
      auto content = tok.at("content").get<std::string>();
      auto [it, inserted] = by_id.emplace(id, content);
      if (!inserted && it->second != content) {
        throw Error(ErrorCode::kMalformedVocab,
                    "added token '" + content + "' reuses id " + std::to_string(id));
      }
    }
  }
  std::vector<std::pair<std::string, std::int64_t>> entries;
  entries.reserve(by_id.size());
  for (auto& [id, piece] : by_id) entries.emplace_back(std::move(piece), id);
  return {Vocabulary::FromEntries(std::move(entries)), std::move(doc)};
}

}  // namespace

TokenizerModel LoadHfTokenizer(const std::filesystem::path& path,
                               std::optional<MarkerConvention> marker) {
  auto [vocab, doc] = ParseHf(path);
  const json& model = doc["model"];
  if (model.value("type", "BPE") != "BPE") {
    throw Error(ErrorCode::kMalformedVocab, path.string() + ": only BPE models are supported");
  }
  std::vector<MergeRule> merges;
  if (model.contains("merges")) {
    for (const auto& m : model["merges"]) {
      if (m.is_array()) {
        merges.push_back({m.at(0).get<std::string>(), m.at(1).get<std::string>()});
      } else {
        auto line = m.get<std::string>();
        auto parsed = ParseMerges(line);
        if (parsed.size() != 1) {
          throw Error(ErrorCode::kUnknownMergeSymbol, "bad merge entry '" + line + "'");
        }
        merges.push_back(std::move(parsed.front()));
      }
    }
  }

  TokenizerOptions options;
  if (marker) {
    options.marker = *marker;
  } else {
    std::string pipeline = doc.value("pre_tokenizer", json()).dump() +
                           doc.value("decoder", json()).dump() +
                           doc.value("normalizer", json()).dump();
    if (pipeline.find("ByteLevel") != std::string::npos) {
      options.marker = MarkerConvention::kByteMarker;
    } else if (pipeline.find("Metaspace") != std::string::npos ||
               pipeline.find(std::string(text::kMetaSpace)) != std::string::npos) {
      options.marker = MarkerConvention::kMetaSpace;
    } else {
      options.marker = DetectMarker(vocab);
    }
  }
  options.byte_fallback = model.value("byte_fallback", true);
  if (model.contains("unk_token") && model["unk_token"].is_string()) {
    options.unk_token = model["unk_token"].get<std::string>();
  } else {
    options.unk_token = DefaultUnk(vocab);
  }
  return TokenizerModel(std::move(vocab), std::move(merges), std::move(options));
}

Vocabulary LoadVocabulary(const std::filesystem::path& path) {
  if (path.filename() == "tokenizer.json") return ParseHf(path).vocab;
  return ParseVocabJson(ReadFile(path));
}

// -------------------------------------------------------------- Partition

TokenPartition Partition(const Vocabulary& source, const Vocabulary& target,
                         const MarkerMap& markers) {
  TokenPartition out;
  out.source_size = source.size();
  out.target_size = target.size();
  out.source_marker = markers.source;
  out.target_marker = markers.target;
  out.mode = markers.canonicalize ? "canonical" : "exact";

  // Canonical source spelling -> lowest source id.
  std::unordered_map<std::string, TokenId> source_index;
  source_index.reserve(source.size());
  for (TokenId id = 0; id < source.size(); ++id) {
    const auto& piece = source.Piece(id);
    std::string key =
        markers.canonicalize ? Canonicalize(piece, markers.source, markers.target) : piece;
    auto [it, inserted] = source_index.emplace(key, id);
    if (!inserted) {
      ++out.collision_count;
      out.warnings.push_back("source ids " + std::to_string(it->second) + " and " +
                             std::to_string(id) + " both map to '" + key + "'; keeping " +
                             std::to_string(it->second));
    }
  }

  for (TokenId id = 0; id < target.size(); ++id) {
    const auto& piece = target.Piece(id);
    auto it = source_index.find(piece);
    if (it != source_index.end()) {
      out.shared.push_back({piece, it->second, id});
    } else {
      out.novel.push_back({piece, id});
    }
  }
  return out;
}

void ValidatePartition(const TokenPartition& partition, std::size_t source_size,
                       std::size_t target_size) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kPartitionInconsistent, msg); };
  if (partition.shared.size() + partition.novel.size() != target_size) {
    fail("partition covers " + std::to_string(partition.shared.size() + partition.novel.size()) +
         " ids but the target vocabulary has " + std::to_string(target_size));
  }
  std::vector<bool> covered(target_size, false);
  auto cover = [&](TokenId id) {
    if (id >= target_size) fail("target id " + std::to_string(id) + " out of range");
    if (covered[id]) fail("target id " + std::to_string(id) + " appears twice");
    covered[id] = true;
  };
  for (const auto& s : partition.shared) {
    if (s.source_id >= source_size) {
      fail("source id " + std::to_string(s.source_id) + " out of range");
    }
    cover(s.target_id);
  }
  for (const auto& n : partition.novel) cover(n.target_id);
}

}  // namespace vocabforge
