// Copyright 2026 The StahlSearch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STAHL_ERROR_HPP_
#define STAHL_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace stahl {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidConfig,
  kInvalidStrategy,
  kInvalidProfile,
  kConstructFailure,
  kBeliefInconsistent,
  kNumericFailure,
  kParseError,
  kIoError,
};

class StahlError : public std::runtime_error {
 public:
  StahlError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw StahlError(code, what);
}

}  // namespace stahl

#endif  // STAHL_ERROR_HPP_
