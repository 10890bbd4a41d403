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

#include "weakcollapse/stats.hpp"

#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "weakcollapse/errors.hpp"

namespace weakcollapse {

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw LengthMismatch("distributions have different lengths");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

double chi_square_survival(double chi2, std::size_t degrees_of_freedom) {
  if (degrees_of_freedom == 0) return chi2 > 0.0 ? 0.0 : 1.0;
  const boost::math::chi_squared dist(static_cast<double>(degrees_of_freedom));
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

GoodnessOfFit chi_square_test(std::span<const std::uint64_t> counts,
                              std::span<const double> reference) {
  if (counts.size() != reference.size()) throw LengthMismatch("counts and reference differ in length");
  double n = 0.0;
  for (auto c : counts) n += static_cast<double>(c);
  if (n <= 0.0) throw BadParameter("chi-square test needs at least one observation");
  GoodnessOfFit fit;
  std::size_t support = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (reference[i] > 0.0) {
      const double expected = n * reference[i];
      const double diff = static_cast<double>(counts[i]) - expected;
      fit.chi2 += diff * diff / expected;
      ++support;
    } else if (counts[i] > 0) {
      fit.impossible_count = true;
    }
  }
  fit.degrees_of_freedom = support > 0 ? support - 1 : 0;
  fit.p_value = fit.impossible_count ? 0.0 : chi_square_survival(fit.chi2, fit.degrees_of_freedom);
  return fit;
}

}  // namespace weakcollapse
