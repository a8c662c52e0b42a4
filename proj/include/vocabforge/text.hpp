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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vocabforge::text {

inline constexpr std::string_view kMetaSpace = "\xE2\x96\x81";  // U+2581
inline constexpr std::string_view kByteSpace = "\xC4\xA0";      // U+0120

void AppendUtf8(std::string& out, char32_t cp);

// Splits into UTF-8 characters. Malformed bytes become single-byte items so
// the concatenation of the result always equals the input.
std::vector<std::string_view> SplitChars(std::string_view s);

// Decodes the code point starting at s[pos]; advances pos. Malformed input
// yields the raw byte value.
char32_t NextCodePoint(std::string_view s, std::size_t& pos);

bool IsUnicodeSpace(char32_t cp);

// Maximal runs of non-whitespace, whitespace per the Unicode White_Space set.
std::vector<std::string_view> SplitWords(std::string_view s);

// GPT-2 style reversible byte <-> printable code point table.
std::string ByteLevelEncode(std::string_view bytes);
std::optional<std::string> ByteLevelDecode(std::string_view encoded);

// "<0xNN>" byte-fallback piece -> byte value.
std::optional<std::uint8_t> ParseByteFallback(std::string_view piece);
std::string ByteFallbackPiece(std::uint8_t byte);

std::string ReplaceAll(std::string_view s, std::string_view from, std::string_view to);

}  // namespace vocabforge::text
