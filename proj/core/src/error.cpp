// Copyright 2026 The lisa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "lisa/error.hpp"

namespace lisa {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMissingMarker: return "MissingMarker";
    case ErrorKind::kDuplicateMarker: return "DuplicateMarker";
    case ErrorKind::kMarkerOrder: return "MarkerOrder";
    case ErrorKind::kEmptyLabel: return "EmptyLabel";
    case ErrorKind::kEmptyTokens: return "EmptyTokens";
    case ErrorKind::kMalformedRecord: return "MalformedRecord";
    case ErrorKind::kEmptyCorpus: return "EmptyCorpus";
    case ErrorKind::kConfigInvalid: return "ConfigInvalid";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kMalformedLine: return "MalformedLine";
    case ErrorKind::kEvenWindow: return "EvenWindow";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kSingleClass: return "SingleClass";
    case ErrorKind::kStaleCache: return "StaleCache";
    case ErrorKind::kEmptyTrainSet: return "EmptyTrainSet";
    case ErrorKind::kEmptyEvalSet: return "EmptyEvalSet";
    case ErrorKind::kPrecondition: return "Precondition";
    case ErrorKind::kModelFormat: return "ModelFormat";
    case ErrorKind::kUnknownRelation: return "UnknownRelation";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace lisa
