// Copyright 2026 The weakcollapse Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace weakcollapse {

/// Base class for every error raised by the library. The `kind()` string is
/// the stable, machine-readable name; `what()` carries the detail.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message);
  const std::string& kind() const noexcept { return kind_; }
  /// The detail without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string kind_;
  std::string message_;
};

#define WEAKCOLLAPSE_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  };

WEAKCOLLAPSE_DEFINE_ERROR(ZeroVector)
WEAKCOLLAPSE_DEFINE_ERROR(DimensionMismatch)
WEAKCOLLAPSE_DEFINE_ERROR(TooLarge)
WEAKCOLLAPSE_DEFINE_ERROR(InvalidState)
WEAKCOLLAPSE_DEFINE_ERROR(InvalidMeasurement)
// Raised whenever a zero-Born-probability outcome is requested. This is the
// weak-compatibility boundary, never a recoverable numerical issue.
WEAKCOLLAPSE_DEFINE_ERROR(ForbiddenOutcome)
WEAKCOLLAPSE_DEFINE_ERROR(LengthMismatch)
WEAKCOLLAPSE_DEFINE_ERROR(InvalidPolicy)
WEAKCOLLAPSE_DEFINE_ERROR(InvalidTable)
WEAKCOLLAPSE_DEFINE_ERROR(ParseError)
WEAKCOLLAPSE_DEFINE_ERROR(AllZeroPriorities)
WEAKCOLLAPSE_DEFINE_ERROR(NoAdmissibleAlternative)
WEAKCOLLAPSE_DEFINE_ERROR(BadParameter)
WEAKCOLLAPSE_DEFINE_ERROR(DegenerateSequence)
WEAKCOLLAPSE_DEFINE_ERROR(ConfigError)

#undef WEAKCOLLAPSE_DEFINE_ERROR

}  // namespace weakcollapse
