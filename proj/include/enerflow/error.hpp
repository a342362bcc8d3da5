// Copyright 2026 The enerflow Authors
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

#ifndef ENERFLOW_ERROR_HPP_
#define ENERFLOW_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace enerflow {

enum class Errc {
  kInvalidArgument,
  kDuplicateLabel,
  kSystemFrozen,
  kNotFrozen,
  kUnknownNode,
  kBipartitenessViolation,
  kSourceHasInflow,
  kSinkHasOutflow,
  kDuplicateEdge,
  kInvalidFlow,
  kEmptySystem,
  kValidationFailed,
  kNotABus,
  kNotAStorage,
  kStorageDegree,
  kMissingNominal,
  kUnknownVariable,
  kDuplicateVariable,
  kDuplicateConstraint,
  kNotOptimal,
  kIoFailure,
  kParseError,
  kNumericalFailure,
};

std::string_view errc_name(Errc code);

// All library failures are reported through this exception type; the code
// lets callers (the CLI in particular) dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace enerflow

#endif  // ENERFLOW_ERROR_HPP_
