// Copyright 2026 The Entrain Authors
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

#ifndef ENTRAIN_STATS_HPP_
#define ENTRAIN_STATS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace entrain::stats {

struct TestResult {
  std::string method;
  double statistic = 0.0;
  double p_value = 1.0;
  std::vector<std::size_t> sizes;  // n, or one entry per group
};

/// Product-moment correlation, two-pass. Throws kLengthMismatch or
/// kDegenerateSeries (n < 3 or a constant side).
double pearson_r(std::span<const double> x, std::span<const double> y);

/// Two-sided p from t = r*sqrt((n-2)/(1-r^2)) on n-2 degrees of freedom.
double pearson_p_value(double r, std::size_t n);

/// statistic = r.
TestResult pearson(std::span<const double> x, std::span<const double> y);

/// Average ranks (1-based), ties share the mean of their positions.
std::vector<double> midranks(std::span<const double> values);

enum class KruskalPValue {
  kAuto,       // exact when the assignments fit kExactAssignmentLimit, else chi-square
  kExact,      // permutation distribution by full enumeration
  kChiSquare,  // asymptotic, (groups - 1) df
};

/// Largest number of group assignments enumerated for an exact p-value.
inline constexpr double kExactAssignmentLimit = 1e6;

/// H with tie correction. The chi-square tail is off by up to ~0.06 for
/// three groups of four, so small designs get the exact permutation p.
/// method is "kruskal_wallis_exact" or "kruskal_wallis_chi2". kExact throws
/// kInvalidConfig above the enumeration limit.
TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups,
                          KruskalPValue p_value = KruskalPValue::kAuto);

/// Royston's approximation (AS R94), 3 <= n <= 5000.
TestResult shapiro_wilk(std::span<const double> x);

enum class LeveneCenter { kMean, kMedian };

/// ANOVA F on absolute deviations from each group's center; kMedian is the
/// Brown-Forsythe variant.
TestResult levene(const std::vector<std::vector<double>>& groups,
                  LeveneCenter center = LeveneCenter::kMean);

/// Fisher-z normal approximation of two-sided test power.
double power_pearson(double r, std::size_t n, double alpha);

}  // namespace entrain::stats

#endif  // ENTRAIN_STATS_HPP_
