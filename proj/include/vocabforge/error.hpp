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

#include <stdexcept>
#include <string>
#include <string_view>

namespace vocabforge {

enum class ErrorCode {
  kIoError,
  kMalformedVocab,
  kUnknownMergeSymbol,
  kUnencodableInput,
  kBadMagic,
  kSizeMismatch,
  kNonFiniteValue,
  kEmptyMatrix,
  kDimensionMismatch,
  kPartitionInconsistent,
  kFallbackRequired,
  kDegenerateSimilarity,
  kZeroNormEmbedding,
  kEmptyIntersection,
  kNonFiniteLoss,
  kSingularSystem,
  kInsufficientTokens,
  kZeroNormRow,
  kEmptyCorpus,
  kPrecondition,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure surfaced by the library. The code is stable and is what the
// CLI maps to exit statuses; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vocabforge
