/*
 * Copyright 2026 The aiou Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "aiou/error.h"

namespace aiou {

std::string_view ErrorName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidMap: return "InvalidMap";
    case ErrorCode::kInvalidMask: return "InvalidMask";
    case ErrorCode::kDegenerateMap: return "DegenerateMap";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kTruncatedRecord: return "TruncatedRecord";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kNonBinaryLabel: return "NonBinaryLabel";
    case ErrorCode::kDuplicateImageId: return "DuplicateImageId";
    case ErrorCode::kUnknownImage: return "UnknownImage";
    case ErrorCode::kNoMatchedImages: return "NoMatchedImages";
    case ErrorCode::kUnknownAttribute: return "UnknownAttribute";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kUndefinedMcc: return "UndefinedMcc";
    case ErrorCode::kAllGroupsExcluded: return "AllGroupsExcluded";
    case ErrorCode::kNoPositives: return "NoPositives";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kUnattainableTarget: return "UnattainableTarget";
    case ErrorCode::kInfeasibleCap: return "InfeasibleCap";
  }
  return "Unknown";
}

}  // namespace aiou
