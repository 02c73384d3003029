// Copyright 2026 The qifdyn Authors
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

#ifndef QIF_ERRORS_HPP_
#define QIF_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace qif {

enum class Errc {
  Parse,
  ShapeMismatch,
  NotStochastic,
  NegativeEntry,
  NotNormalized,
  NegativeMass,
  DuplicateLabel,
  UnknownLabel,
  ZeroProbabilityObservation,
  EnumerationTooLarge,
  UnknownScenario,
  UnknownPerson,
  InvalidArgument,
};

/// All toolkit failures are reported through this exception; code() keeps the
/// category machine-readable for the C API and the CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace qif

#endif  // QIF_ERRORS_HPP_
