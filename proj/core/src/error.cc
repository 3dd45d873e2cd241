// Copyright 2026 The MRF Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrf/error.h"

namespace mrf {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kEmpty: return "EmptyError";
    case ErrorCode::kSize: return "SizeError";
    case ErrorCode::kEmptyNode: return "EmptyNode";
    case ErrorCode::kMismatch: return "MismatchError";
    case ErrorCode::kEmptyChild: return "EmptyChild";
    case ErrorCode::kNoChoices: return "NoChoices";
    case ErrorCode::kDomain: return "DomainError";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kTooFewPairs: return "TooFewPairs";
    case ErrorCode::kIo: return "IoError";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace mrf
