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

#include "vocabforge/error.hpp"

namespace vocabforge {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMalformedVocab: return "MalformedVocab";
    case ErrorCode::kUnknownMergeSymbol: return "UnknownMergeSymbol";
    case ErrorCode::kUnencodableInput: return "UnencodableInput";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kSizeMismatch: return "SizeMismatch";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kPartitionInconsistent: return "PartitionInconsistent";
    case ErrorCode::kFallbackRequired: return "FallbackRequired";
    case ErrorCode::kDegenerateSimilarity: return "DegenerateSimilarity";
    case ErrorCode::kZeroNormEmbedding: return "ZeroNormEmbedding";
    case ErrorCode::kEmptyIntersection: return "EmptyIntersection";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kInsufficientTokens: return "InsufficientTokens";
    case ErrorCode::kZeroNormRow: return "ZeroNormRow";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kPrecondition: return "PreconditionFailed";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace vocabforge
