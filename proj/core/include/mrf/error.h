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

#ifndef MRF_ERROR_H_
#define MRF_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace mrf {

enum class ErrorCode {
  kParse,
  kSchema,
  kEmpty,
  kSize,
  kEmptyNode,
  kMismatch,
  kEmptyChild,
  kNoChoices,
  kDomain,
  kConfig,
  kTooFewPairs,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

}  // namespace mrf

#endif  // MRF_ERROR_H_
