// Copyright 2026 The neurotalk-cpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// common/error.h

#ifndef NEUROTALK_COMMON_ERROR_H_
#define NEUROTALK_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace neurotalk {

// Numeric values double as CLI exit codes (0 is success).
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kConfig = 2,
  kMissingArtifact = 3,
  kNumerical = 4,
  kIo = 5,
  kFingerprintMismatch = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string &what) {
  throw Error(code, what);
}

inline void Require(bool cond, const std::string &what) {
  if (!cond) throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace neurotalk

#endif  // NEUROTALK_COMMON_ERROR_H_
