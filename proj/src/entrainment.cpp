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

#include "entrain/entrainment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "entrain/error.hpp"
#include "entrain/stats.hpp"

namespace entrain {

namespace {

void require_compatible(const ResampledTrack& a, const ResampledTrack& b) {
  if (a.feature != b.feature) {
    throw Error(ErrorCode::kGridMismatch, "tracks carry different features");
  }
  if (!a.grid.same_as(b.grid) || a.values.size() != a.grid.size() ||
      b.values.size() != b.grid.size()) {
    throw Error(ErrorCode::kGridMismatch, "tracks are not on the same grid");
  }
}

}  // namespace

CorrelationResult correlation_result(double r, std::size_t n, const SignificanceConfig& sig) {
  CorrelationResult out;
  out.r = r;
  out.n = n;
  const double two_sided = stats::pearson_p_value(r, n);
  out.p_value = sig.one_sided ? (r > 0.0 ? two_sided / 2.0 : 1.0 - two_sided / 2.0) : two_sided;
  out.significant_positive = r > 0.0 && out.p_value < sig.alpha;
  return out;
}

double ProximitySeries::mean() const {
  double s = 0.0;
  for (double v : values) s += v;
  return values.empty() ? 0.0 : s / static_cast<double>(values.size());
}

ProximitySeries proximity(const ResampledTrack& a, const ResampledTrack& b) {
  require_compatible(a, b);
  ProximitySeries d{a.grid, std::vector<double>(a.values.size())};
  for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] = -std::abs(a.values[i] - b.values[i]);
  return d;
}

CorrelationResult convergence(const ResampledTrack& a, const ResampledTrack& b,
                              const SignificanceConfig& sig) {
  const ProximitySeries d = proximity(a, b);
  if (d.values.size() < 3) throw Error(ErrorCode::kDegenerateSeries, "convergence needs 3+ points");
  const auto t = d.grid.times();
  return correlation_result(stats::pearson_r(d.values, t), d.values.size(), sig);
}

CorrelationResult synchrony_at(const ResampledTrack& a, const ResampledTrack& b, long lag_steps,
                               const SignificanceConfig& sig) {
  require_compatible(a, b);
  const auto n = static_cast<long>(a.values.size());
  const long overlap = n - std::labs(lag_steps);
  if (overlap < 3) {
    throw Error(ErrorCode::kInsufficientOverlap,
                "lag of " + std::to_string(lag_steps) + " steps leaves fewer than 3 pairs");
  }
  // Pairs (a[i + lag], b[i]) for every i where both indices are on the grid.
  const long first = std::max(0L, -lag_steps);
  std::vector<double> xa(static_cast<std::size_t>(overlap));
  std::vector<double> xb(static_cast<std::size_t>(overlap));
  for (long k = 0; k < overlap; ++k) {
    xa[static_cast<std::size_t>(k)] = a.values[static_cast<std::size_t>(first + k + lag_steps)];
    xb[static_cast<std::size_t>(k)] = b.values[static_cast<std::size_t>(first + k)];
  }
  auto out = correlation_result(stats::pearson_r(xa, xb), xa.size(), sig);
  out.lag = static_cast<double>(lag_steps) * a.grid.step();
  return out;
}

CorrelationResult synchrony(const ResampledTrack& a, const ResampledTrack& b,
                            const SynchronyConfig& cfg, const SignificanceConfig& sig) {
  require_compatible(a, b);
  const double step = a.grid.step();
  if (!cfg.search) return synchrony_at(a, b, std::lround(cfg.delta / step), sig);

  const LagSearch& s = *cfg.search;
  if (!(s.step > 0.0) || !(s.min <= s.max)) {
    throw Error(ErrorCode::kInvalidConfig, "lag search needs min <= max and step > 0");
  }
  const auto count = static_cast<long>(std::floor((s.max - s.min) / s.step + 1e-9)) + 1;
  std::optional<CorrelationResult> best;
  std::optional<Error> last_error;
  long previous = 0;
  for (long i = 0; i < count; ++i) {
    const long lag = std::lround((s.min + static_cast<double>(i) * s.step) / step);
    if (i > 0 && lag == previous) continue;
    previous = lag;
    try {
      auto res = synchrony_at(a, b, lag, sig);
      const bool better =
          !best || res.r > best->r ||
          (res.r == best->r && std::abs(*res.lag) < std::abs(*best->lag));
      if (better) best = res;
    } catch (const Error& e) {
      last_error = e;
    }
  }
  if (!best) throw last_error.value_or(Error(ErrorCode::kInsufficientOverlap, "empty lag range"));
  return *best;
}

const FeatureEntrainment& EntrainmentReport::at(Feature f) const {
  for (const auto& fe : features) {
    if (fe.feature == f) return fe;
  }
  throw Error(ErrorCode::kEmptyInput, "feature not in report: " + std::string(to_string(f)));
}

EntrainmentReport analyze_dyad(const std::string& dyad_id, const std::vector<ResampledTrack>& a,
                               const std::vector<ResampledTrack>& b,
                               const EntrainmentConfig& cfg,
                               const std::map<Feature, std::string>& absent_reasons) {
  auto find = [](const std::vector<ResampledTrack>& tracks, Feature f) -> const ResampledTrack* {
    for (const auto& t : tracks) {
      if (t.feature == f) return &t;
    }
    return nullptr;
  };

  EntrainmentReport report;
  report.dyad_id = dyad_id;
  for (Feature f : kAllFeatures) {
    FeatureEntrainment fe;
    fe.feature = f;
    const ResampledTrack* ta = find(a, f);
    const ResampledTrack* tb = find(b, f);
    if (ta == nullptr || tb == nullptr) {
      const auto it = absent_reasons.find(f);
      fe.absent_reason = it != absent_reasons.end() ? it->second
                         : ta == nullptr            ? "no track for first speaker"
                                                    : "no track for second speaker";
      report.features.push_back(std::move(fe));
      continue;
    }
    try {
      fe.proximity = proximity(*ta, *tb);
      fe.proximity_mean = fe.proximity->mean();
    } catch (const Error& e) {
      fe.absent_reason = e.what();
      report.features.push_back(std::move(fe));
      continue;
    }
    try {
      fe.convergence.value = convergence(*ta, *tb, cfg.significance);
    } catch (const Error& e) {
      fe.convergence.error = e.what();
    }
    try {
      fe.synchrony.value = synchrony(*ta, *tb, cfg.synchrony, cfg.significance);
    } catch (const Error& e) {
      fe.synchrony.error = e.what();
    }
    const bool flagged = (fe.convergence.ok() && fe.convergence.value->significant_positive) ||
                         (fe.synchrony.ok() && fe.synchrony.value->significant_positive);
    report.entrained = report.entrained || flagged;
    report.features.push_back(std::move(fe));
  }
  return report;
}

}  // namespace entrain
