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

#include "entrain/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "entrain/distributions.hpp"
#include "entrain/error.hpp"

namespace entrain::stats {

namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Spread indistinguishable from rounding noise around the mean.
bool negligible_spread(double sum_sq_dev, std::size_t n, double mean) {
  return !(std::sqrt(sum_sq_dev / static_cast<double>(n)) > 1e-12 * std::max(1.0, std::abs(mean)));
}

double poly(const double* c, int n, double x) {
  double r = c[n - 1];
  for (int i = n - 2; i >= 0; --i) r = r * x + c[i];
  return r;
}

}  // namespace

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "pearson needs equal-length series");
  }
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorCode::kDegenerateSeries, "pearson needs at least 3 pairs");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (negligible_spread(sxx, n, mx) || negligible_spread(syy, n, my)) {
    throw Error(ErrorCode::kDegenerateSeries, "pearson input has zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson_p_value(double r, std::size_t n) {
  if (n < 3) throw Error(ErrorCode::kDegenerateSeries, "p-value needs n >= 3");
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = r * std::sqrt(df / (1.0 - r2));
  return std::clamp(dist::student_t_two_sided(t, df), 0.0, 1.0);
}

TestResult pearson(std::span<const double> x, std::span<const double> y) {
  const double r = pearson_r(x, y);
  return {"pearson", r, pearson_p_value(r, x.size()), {x.size()}};
}

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

// Walks every assignment of the pooled ranks to groups of the observed sizes
// and counts those whose between-group term reaches the observed one.
class ExactKruskal {
 public:
  ExactKruskal(const std::vector<double>& ranks, const std::vector<std::size_t>& sizes)
      : ranks_(ranks), sizes_(sizes), remaining_(sizes), sums_(sizes.size(), 0.0) {}

  double p_value(double observed) {
    // Rank sums are multiples of 0.5, so only the final division rounds.
    threshold_ = observed * (1.0 - 1e-12);
    walk(0);
    return static_cast<double>(hits_) / static_cast<double>(total_);
  }

 private:
  void walk(std::size_t item) {
    if (item == ranks_.size()) {
      double between = 0.0;
      for (std::size_t g = 0; g < sizes_.size(); ++g) {
        between += sums_[g] * sums_[g] / static_cast<double>(sizes_[g]);
      }
      ++total_;
      if (between >= threshold_) ++hits_;
      return;
    }
    for (std::size_t g = 0; g < sizes_.size(); ++g) {
      if (remaining_[g] == 0) continue;
      --remaining_[g];
      sums_[g] += ranks_[item];
      walk(item + 1);
      sums_[g] -= ranks_[item];
      ++remaining_[g];
    }
  }

  const std::vector<double>& ranks_;
  const std::vector<std::size_t>& sizes_;
  std::vector<std::size_t> remaining_;
  std::vector<double> sums_;
  double threshold_ = 0.0;
  std::uint64_t hits_ = 0;
  std::uint64_t total_ = 0;
};

// N! / (n1! ... nk!) in floating point.
double assignment_count(const std::vector<std::size_t>& sizes) {
  double log_count = std::lgamma(static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0})) + 1.0);
  for (std::size_t s : sizes) log_count -= std::lgamma(static_cast<double>(s) + 1.0);
  return std::exp(log_count);
}

}  // namespace

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups, KruskalPValue p_value) {
  if (groups.size() < 2) throw Error(ErrorCode::kTooFewGroups, "kruskal-wallis needs 2+ groups");
  std::vector<double> pooled;
  std::vector<std::size_t> sizes;
  for (const auto& g : groups) {
    if (g.empty()) throw Error(ErrorCode::kTooFewGroups, "kruskal-wallis group is empty");
    pooled.insert(pooled.end(), g.begin(), g.end());
    sizes.push_back(g.size());
  }
  const double n = static_cast<double>(pooled.size());
  if (pooled.size() < 3) throw Error(ErrorCode::kTooFewGroups, "kruskal-wallis needs n >= 3");

  const auto ranks = midranks(pooled);
  double between = 0.0;
  std::size_t offset = 0;
  for (std::size_t size : sizes) {
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < size; ++i) rank_sum += ranks[offset + i];
    between += rank_sum * rank_sum / static_cast<double>(size);
    offset += size;
  }

  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_sum = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_sum += t * t * t - t;
    i = j;
  }
  const double correction = 1.0 - tie_sum / (n * n * n - n);
  if (correction <= 0.0) {
    throw Error(ErrorCode::kAllValuesIdentical, "kruskal-wallis input is constant");
  }
  const double h_raw = 12.0 / (n * (n + 1.0)) * between - 3.0 * (n + 1.0);
  const double h = std::max(0.0, h_raw / correction);

  const bool fits = assignment_count(sizes) <= kExactAssignmentLimit * (1.0 + 1e-9);
  if (p_value == KruskalPValue::kExact && !fits) {
    throw Error(ErrorCode::kInvalidConfig, "too many group assignments for an exact kruskal-wallis p");
  }
  if (p_value == KruskalPValue::kExact || (p_value == KruskalPValue::kAuto && fits)) {
    return {"kruskal_wallis_exact", h, ExactKruskal(ranks, sizes).p_value(between), sizes};
  }
  const double df = static_cast<double>(groups.size() - 1);
  return {"kruskal_wallis_chi2", h, dist::chi_square_sf(h, df), sizes};
}

TestResult shapiro_wilk(std::span<const double> data) {
  const std::size_t n = data.size();
  if (n < 3 || n > 5000) {
    throw Error(ErrorCode::kOutOfRangeN, "shapiro-wilk needs 3 <= n <= 5000");
  }
  std::vector<double> x(data.begin(), data.end());
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 1e-12 * std::max(1.0, std::abs(x.front())))) {
    throw Error(ErrorCode::kAllValuesIdentical, "shapiro-wilk input is constant");
  }

  // Coefficients of AS R94.
  static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
  static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
  static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};
  static constexpr double g[] = {-2.273, 0.459};

  const double an = static_cast<double>(n);
  const std::size_t half = n / 2;
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      m[i] = dist::normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, 6, rsn) - m[0] / ssumm2;
    std::size_t first_scaled;
    double fac;
    if (n > 5) {
      const double a2 = -m[1] / ssumm2 + poly(c2, 6, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
      first_scaled = 2;
    } else {
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
      first_scaled = 1;
    }
    a[0] = a1;
    for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  }

  // W as the squared correlation between the ordered sample and the
  // antisymmetric coefficient vector.
  const double mean = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  double num = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    num += a[i] * (x[n - 1 - i] - x[i]);
    norm += 2.0 * a[i] * a[i];
  }
  const double w = std::clamp(num * num / (norm * ss), 0.0, 1.0);

  double p;
  if (n == 3) {
    constexpr double pi6 = 1.90985931710274;  // 6 / pi
    constexpr double stqr = 1.04719755119660;  // pi / 3
    p = std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0);
  } else {
    double w1 = std::log1p(-w);
    double mu;
    double sigma;
    if (n <= 11) {
      const double gamma = poly(g, 2, an);
      if (w1 >= gamma) return {"shapiro_wilk", w, 1e-99, {n}};
      w1 = -std::log(gamma - w1);
      mu = poly(c3, 4, an);
      sigma = std::exp(poly(c4, 4, an));
    } else {
      const double ln = std::log(an);
      mu = poly(c5, 4, ln);
      sigma = std::exp(poly(c6, 3, ln));
    }
    p = dist::normal_sf((w1 - mu) / sigma);
  }
  return {"shapiro_wilk", w, std::clamp(p, 0.0, 1.0), {n}};
}

TestResult levene(const std::vector<std::vector<double>>& groups, LeveneCenter center) {
  if (groups.size() < 2) throw Error(ErrorCode::kTooFewGroups, "levene needs 2+ groups");
  std::vector<std::vector<double>> dev;
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  for (const auto& grp : groups) {
    if (grp.size() < 2) throw Error(ErrorCode::kTooFewGroups, "levene groups need 2+ values");
    const double c = center == LeveneCenter::kMean ? mean_of(grp) : median_of(grp);
    std::vector<double> z(grp.size());
    for (std::size_t i = 0; i < grp.size(); ++i) z[i] = std::abs(grp[i] - c);
    dev.push_back(std::move(z));
    sizes.push_back(grp.size());
    total += grp.size();
  }
  double grand = 0.0;
  for (const auto& z : dev) grand += std::accumulate(z.begin(), z.end(), 0.0);
  grand /= static_cast<double>(total);

  double between = 0.0;
  double within = 0.0;
  for (const auto& z : dev) {
    const double zm = mean_of(z);
    between += static_cast<double>(z.size()) * (zm - grand) * (zm - grand);
    for (double v : z) within += (v - zm) * (v - zm);
  }
  if (!(within > 1e-24 * std::max(1.0, grand * grand) * static_cast<double>(total))) {
    throw Error(ErrorCode::kDegenerateGroup, "levene deviations are constant within groups");
  }
  const double k = static_cast<double>(groups.size());
  const double df1 = k - 1.0;
  const double df2 = static_cast<double>(total) - k;
  const double w = (df2 / df1) * between / within;
  const std::string method = center == LeveneCenter::kMean ? "levene" : "brown_forsythe";
  return {method, w, dist::f_sf(w, df1, df2), sizes};
}

double power_pearson(double r, std::size_t n, double alpha) {
  if (!(std::abs(r) < 1.0)) throw Error(ErrorCode::kInvalidEffectSize, "need |r| < 1");
  if (n < 4) throw Error(ErrorCode::kInvalidConfig, "power needs n >= 4");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::kInvalidConfig, "alpha in (0, 1)");
  const double shift = std::atanh(r) * std::sqrt(static_cast<double>(n) - 3.0);
  const double crit = dist::normal_quantile(1.0 - alpha / 2.0);
  return std::clamp(dist::normal_cdf(shift - crit) + dist::normal_cdf(-shift - crit), 0.0, 1.0);
}

}  // namespace entrain::stats
