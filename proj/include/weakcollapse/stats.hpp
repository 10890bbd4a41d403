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

#include <cstddef>
#include <cstdint>
#include <span>

namespace weakcollapse {

/// Half the L1 distance. Throws LengthMismatch on unequal lengths.
double tv_distance(std::span<const double> p, std::span<const double> q);

struct GoodnessOfFit {
  double chi2 = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;
  /// True when some count landed on an outcome of reference probability 0;
  /// the p-value is then 0 regardless of chi2.
  bool impossible_count = false;
};

/// Pearson chi-square test of `counts` against `reference`. Outcomes with
/// reference probability 0 are excluded from chi2 and from the degrees of
/// freedom.
GoodnessOfFit chi_square_test(std::span<const std::uint64_t> counts, std::span<const double> reference);

/// Upper tail P(X >= chi2) of the chi-square distribution.
double chi_square_survival(double chi2, std::size_t degrees_of_freedom);

}  // namespace weakcollapse
