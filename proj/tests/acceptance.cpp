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


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and sample sizes are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "entrain/entrainment.hpp"
#include "entrain/error.hpp"
#include "entrain/features.hpp"
#include "entrain/pipeline.hpp"
#include "entrain/preprocess.hpp"
#include "entrain/prosody.hpp"
#include "entrain/segmentation.hpp"
#include "entrain/stats.hpp"
#include "entrain/streaming.hpp"
#include "entrain/synth.hpp"
#include "support/fixtures.hpp"

namespace {

namespace fs = std::filesystem;
using namespace entrain;
using testing::make_track;
using testing::naive_pearson;
using testing::smooth_series;
using testing::TempDir;

// Pinned tolerances.
constexpr double kIdentityTol = 1e-12;
constexpr double kOracleTol = 1e-9;
constexpr double kPermutationTol = 0.03;
constexpr double kPowerTol = 0.02;
constexpr double kPitchTol = 0.01;
constexpr double kStreamTol = 1e-9;
constexpr double kIdentityBudget = 5.0;     // s
constexpr double kStatsBudget = 60.0;       // s
constexpr double kTenMinuteBudget = 10.0;   // s

#ifndef ENTRAIN_CLI
#define ENTRAIN_CLI "entrain"
#endif

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> white(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

std::vector<double> affine(std::vector<double> v, double scale, double shift) {
  for (double& x : v) x = scale * x + shift;
  return v;
}

// 1. Metric identities.
void metric_identities(Verdict& v) {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> scale(0.1, 10.0), shift(-5.0, 5.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto va = smooth_series(rng, 200, 0.1);
    auto vb = white(rng, 200);
    for (std::size_t i = 0; i < vb.size(); ++i) vb[i] = 0.3 * vb[i] + 0.5 * va[i];
    const auto a = make_track(va);
    const auto b = make_track(vb);

    for (double d : proximity(a, a).values) worst = std::max(worst, std::abs(d));
    worst = std::max(worst, std::abs(synchrony(a, a).r - 1.0));

    const auto pab = proximity(a, b).values;
    const auto pba = proximity(b, a).values;
    for (std::size_t i = 0; i < pab.size(); ++i) worst = std::max(worst, std::abs(pab[i] - pba[i]));
    const double conv = convergence(a, b).r;
    worst = std::max(worst, std::abs(conv - convergence(b, a).r));
    const double sync = synchrony_at(a, b, 3).r;
    worst = std::max(worst, std::abs(sync - synchrony_at(b, a, -3).r));

    // One positive affine map on both tracks scales D(t); each track may take
    // its own map for synchrony.
    const double c = scale(rng), s = shift(rng);
    worst = std::max(worst, std::abs(conv - convergence(make_track(affine(va, c, s)),
                                                        make_track(affine(vb, c, s))).r));
    worst = std::max(worst, std::abs(sync - synchrony_at(make_track(affine(va, c, s)),
                                                         make_track(affine(vb, scale(rng), shift(rng))), 3).r));
  }
  const double elapsed = seconds_since(start);
  v.detail << "max deviation " << worst << " over 100 track pairs, " << elapsed << " s";
  v.require(worst <= kIdentityTol, "deviation <= 1e-12");
  v.require(elapsed < kIdentityBudget, "runtime < 5 s");
}

// 2. Convergence oracle on the linear closing dyad.
void convergence_oracle(Verdict& v) {
  std::vector<double> a, b, d, t;
  for (int i = 0; i <= 100; ++i) {
    const double ti = i;
    a.push_back(2.0 - 0.02 * ti);
    b.push_back(-2.0 + 0.02 * ti);
    d.push_back(-std::abs(4.0 - 0.04 * ti));  // closed form of -|a - b|
    t.push_back(ti);
  }
  const auto r = convergence(make_track(a, 0.0, 1.0), make_track(b, 0.0, 1.0),
                             SignificanceConfig{0.01, false});
  const double oracle = naive_pearson(d, t);
  v.detail << "r " << r.r << " vs direct " << oracle << ", p " << r.p_value;
  v.require(std::abs(r.r - oracle) <= kOracleTol, "|r - direct| <= 1e-9");
  v.require(r.n == 101, "101 grid points");
  v.require(r.significant_positive, "significant_positive at alpha 0.01");
}

// 3. Lag recovery. b(t) = a(t + d0), so corr(A(t + delta), B(t)) peaks at delta = d0.
void lag_recovery(Verdict& v) {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> lag(-1.0, 1.0);
  SynchronyConfig cfg;
  cfg.search = LagSearch{-1.0, 1.0, 0.1};
  int recovered = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double d0 = lag(rng);
    std::mt19937_64 shape = rng;
    const auto va = smooth_series(shape, 300, 0.1);
    shape = rng;
    const auto vb = smooth_series(shape, 300, 0.1, d0);
    rng.discard(16);
    const auto r = synchrony(make_track(va), make_track(vb), cfg);
    if (r.lag && std::abs(*r.lag - d0) <= 0.1 + 1e-9) ++recovered;
  }
  v.detail << recovered << "/50 lags recovered within one grid step (0.1 s)";
  v.require(recovered >= 49, ">= 49/50");
}

// 4. Fast KNN against the brute-force oracle.
void knn_equivalence(Verdict& v) {
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<int> n_dist(1, 150), k_dist(1, 12), coarse(0, 40);
  std::uniform_real_distribution<double> t_dist(0.0, 40.0), v_dist(-3.0, 3.0);
  std::size_t compared = 0, mismatched = 0, tie_cases = 0, short_cases = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = static_cast<std::size_t>(k_dist(rng));
    const bool few = trial % 10 == 0;
    const bool ties = trial % 3 == 0;
    const int n = few ? std::max<int>(1, static_cast<int>(k) - 1 - trial % 3) : n_dist(rng);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n; ++i) pts.push_back({ties ? coarse(rng) * 0.5 : t_dist(rng), v_dist(rng)});
    std::stable_sort(pts.begin(), pts.end(), [](auto& x, auto& y) { return x.first < y.first; });
    std::vector<UtteranceFeaturePoint> points;
    for (auto& [t, val] : pts) points.push_back({"a", Feature::kMeanPitch, t, val, {}});
    const TimeGrid grid(-1.0, 21.0, ties ? 0.25 : 0.1);
    const auto track = knn_regress(points, grid, k);
    tie_cases += ties;
    short_cases += pts.size() < k;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      ++compared;
      if (track.values[i] != testing::brute_knn(pts, grid.at(i), k)) ++mismatched;
    }
  }
  v.detail << mismatched << " bitwise mismatches in " << compared << " grid values (1000 instances, "
           << tie_cases << " with ties, " << short_cases << " with fewer than k points)";
  v.require(mismatched == 0, "bitwise equal");
  v.require(short_cases > 0 && tie_cases > 0, "tie and fewer-than-k cases exercised");
}

double plain_h(const std::vector<std::vector<double>>& groups) {
  std::vector<double> pooled;
  for (const auto& g : groups) pooled.insert(pooled.end(), g.begin(), g.end());
  const double n = static_cast<double>(pooled.size());
  double sum = 0.0;
  for (const auto& g : groups) {
    double rank_sum = 0.0;
    for (double x : g) {
      rank_sum += 1.0 + static_cast<double>(std::count_if(pooled.begin(), pooled.end(),
                                                          [&](double w) { return w < x; }));
    }
    sum += rank_sum * rank_sum / static_cast<double>(g.size());
  }
  return 12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0);
}

// 5. Statistics calibration.
void statistics_calibration(Verdict& v) {
  const auto start = Clock::now();
  std::mt19937_64 rng(505);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst_pearson = 0.0;

  {  // Exact enumeration over all 120 orderings.
    const std::vector<double> x{1, 2, 3, 4, 5}, y{2, 1, 4, 3, 5};
    const double r = naive_pearson(x, y);
    std::vector<double> perm(x);
    int extreme = 0;
    do {
      extreme += std::abs(naive_pearson(x, perm)) >= std::abs(r) - 1e-12;
    } while (std::next_permutation(perm.begin(), perm.end()));
    worst_pearson = std::max(worst_pearson, std::abs(stats::pearson(x, y).p_value - extreme / 120.0));
  }
  for (std::size_t n : {8u, 10u, 12u}) {  // Monte-Carlo permutations.
    std::vector<double> x = white(rng, n), y = white(rng, n);
    for (std::size_t i = 0; i < n; ++i) y[i] += 0.5 * x[i];
    const double r = naive_pearson(x, y);
    int extreme = 0;
    constexpr int kShuffles = 100000;
    for (int i = 0; i < kShuffles; ++i) {
      std::shuffle(y.begin(), y.end(), rng);
      extreme += std::abs(naive_pearson(x, y)) >= std::abs(r) - 1e-12;
    }
    const double p = stats::pearson_p_value(r, n);
    worst_pearson = std::max(worst_pearson, std::abs(p - static_cast<double>(extreme) / kShuffles));
  }

  double worst_kw = 0.0;
  for (int instance = 0; instance < 3; ++instance) {
    std::vector<std::vector<double>> groups(3, std::vector<double>(4));
    for (std::size_t k = 0; k < 3; ++k) {
      for (double& x : groups[k]) x = g(rng);
    }
    const auto t = stats::kruskal_wallis(groups);
    std::vector<double> pooled;
    for (const auto& grp : groups) pooled.insert(pooled.end(), grp.begin(), grp.end());
    int extreme = 0;
    constexpr int kResamples = 100000;
    for (int i = 0; i < kResamples; ++i) {
      std::shuffle(pooled.begin(), pooled.end(), rng);
      extreme += plain_h({{pooled.begin(), pooled.begin() + 4},
                          {pooled.begin() + 4, pooled.begin() + 8},
                          {pooled.begin() + 8, pooled.end()}}) >= t.statistic - 1e-9;
    }
    worst_kw = std::max(worst_kw, std::abs(t.p_value - static_cast<double>(extreme) / kResamples));
  }

  int rejected = 0;
  for (int seed = 0; seed < 1000; ++seed) {
    std::mt19937_64 r(50000 + static_cast<std::uint64_t>(seed));
    rejected += stats::shapiro_wilk(white(r, 500)).p_value < 0.05;
  }
  const double sw_rate = rejected / 1000.0;

  constexpr double kR = 0.5;
  constexpr std::size_t kN = 43;
  int hits = 0;
  constexpr int kTrials = 100000;
  std::vector<double> x(kN), y(kN);
  for (int trial = 0; trial < kTrials; ++trial) {
    for (std::size_t i = 0; i < kN; ++i) {
      x[i] = g(rng);
      y[i] = kR * x[i] + std::sqrt(1.0 - kR * kR) * g(rng);
    }
    hits += stats::pearson(x, y).p_value < 0.01;
  }
  const double power_gap = std::abs(stats::power_pearson(kR, kN, 0.01) - static_cast<double>(hits) / kTrials);
  const double elapsed = seconds_since(start);

  v.detail << "pearson max |p - perm| " << worst_pearson << ", kruskal-wallis " << worst_kw
           << ", shapiro-wilk rejection " << sw_rate << ", power gap " << power_gap << ", "
           << elapsed << " s";
  v.require(worst_pearson <= kPermutationTol, "pearson within 0.03");
  v.require(worst_kw <= kPermutationTol, "kruskal-wallis within 0.03");
  v.require(sw_rate >= 0.03 && sw_rate <= 0.07, "shapiro-wilk rate in [0.03, 0.07]");
  v.require(power_gap <= kPowerTol, "power within 0.02");
  v.require(elapsed < kStatsBudget, "runtime < 60 s");
}

// 6. Pitch accuracy.
void pitch_accuracy(Verdict& v) {
  constexpr int kRate = 16000;
  for (double f : {110.0, 220.0, 440.0}) {
    const auto track = pitch_autocorrelation(AudioBuffer(synth::sine(f, 0.5, 2.0, kRate), kRate));
    std::size_t voiced = 0, within = 0;
    for (std::size_t i = 0; i < track.size(); ++i) {
      if (!track.active[i]) continue;
      ++voiced;
      within += std::abs(track.values[i] - f) <= kPitchTol * f;
    }
    const double share = voiced ? static_cast<double>(within) / voiced : 0.0;
    v.detail << f << " Hz " << within << "/" << voiced << " voiced frames within 1%; ";
    v.require(share >= 0.95, std::to_string(static_cast<int>(f)) + " Hz >= 95% of voiced frames");
    v.require(voiced >= track.size() * 9 / 10, std::to_string(static_cast<int>(f)) + " Hz mostly voiced");
  }
  std::vector<float> x = synth::sine(220.0, 0.5, 1.0, kRate);
  const auto high = synth::sine(330.0, 0.5, 1.0, kRate);
  x.insert(x.end(), high.begin(), high.end());
  const auto track = pitch_autocorrelation(AudioBuffer(x, kRate));
  std::vector<double> first, second;
  for (std::size_t i = 0; i < track.size(); ++i) {
    if (!track.active[i]) continue;
    if (track.times[i] < 0.95) first.push_back(track.values[i]);
    if (track.times[i] > 1.05) second.push_back(track.values[i]);
  }
  auto median = [](std::vector<double> s) {
    if (s.empty()) return 0.0;
    std::nth_element(s.begin(), s.begin() + s.size() / 2, s.end());
    return s[s.size() / 2];
  };
  const double m1 = median(first), m2 = median(second);
  v.detail << "plateaus " << m1 << " / " << m2 << " Hz";
  v.require(std::abs(m1 - 220.0) <= kPitchTol * 220.0 && std::abs(m2 - 330.0) <= kPitchTol * 330.0,
            "both plateaus within 1%");
}

SessionManifest dialogue_session(const fs::path& dir, const std::string& id, const std::string& condition) {
  SessionManifest s;
  s.dyad_id = id;
  s.condition = condition;
  s.tutor_audio = dir / id / "tutor.wav";
  s.participant_audio = dir / id / "participant.wav";
  return s;
}

// 7. Classification pipeline echo on synthetic dialogues.
void classification_echo(Verdict& v) {
  TempDir dir;
  StudyManifest study;
  for (int i = 0; i < 20; ++i) {
    const bool converging = i < 13;
    synth::DialogueSpec spec;
    spec.duration = 240.0;
    spec.seed = 7000 + static_cast<std::uint64_t>(i);
    spec.coupling_start = converging ? 0.0 : 0.9;
    spec.coupling_end = converging ? 0.95 : 0.0;
    const std::string id = "d" + std::to_string(i + 1);
    synth::write_dialogue(synth::dialogue(spec), spec.sample_rate, dir.path() / id);
    study.dyads.push_back(dialogue_session(dir.path(), id, converging ? "human" : "robot"));
  }
  const StudyReport report = run_study(study);
  std::size_t failed = 0;
  for (const auto& d : report.dyads) failed += !d.ok();

  // Fraction over the whole 20-dyad set: one pooled condition.
  std::vector<DyadAnalysis> pooled = report.dyads;
  for (auto& d : pooled) d.condition = "all";
  const auto frac = significant_positive_fraction(pooled, Feature::kMeanPitch, Metric::kConvergence);
  const double fraction = frac.empty() ? 0.0 : frac[0].fraction;

  double kw_p = 1.0;
  double human_mean = 0.0, robot_mean = 0.0;
  try {
    const auto cmp = compare_conditions(report.dyads, Feature::kMeanPitch, Metric::kConvergence);
    kw_p = cmp.kruskal_wallis.p_value;
    for (const auto& d : report.dyads) {
      const auto r = metric_value(d.report, Feature::kMeanPitch, Metric::kConvergence);
      if (!r) continue;
      (d.condition == "human" ? human_mean : robot_mean) += *r / (d.condition == "human" ? 13.0 : 7.0);
    }
  } catch (const Error& e) {
    v.detail << "comparison failed: " << e.what() << "; ";
  }
  v.detail << "significant_positive_fraction " << (frac.empty() ? 0 : frac[0].flagged) << "/"
           << (frac.empty() ? 0 : frac[0].total) << " = " << fraction << ", kruskal-wallis p " << kw_p
           << ", mean convergence human " << human_mean << " vs robot " << robot_mean;
  v.require(failed == 0, "every dyad analyzed");
  v.require(fraction == 0.65, "fraction exactly 0.65");
  v.require(kw_p < 0.01, "kruskal-wallis p < 0.01");
  v.require(human_mean > robot_mean, "constructed direction");
}

// 8. Streaming against batch windows on fixture sessions.
void streaming_equivalence(Verdict& v) {
  constexpr int kRate = 16000;
  std::size_t emissions = 0, compared = 0;
  double worst = 0.0;
  bool counts_ok = true;
  for (const auto& [seed, coupling_end, delta] : {std::tuple{81u, 0.95, 0.0}, std::tuple{82u, 0.0, -0.5}}) {
    synth::DialogueSpec spec;
    spec.duration = 150.0;
    spec.seed = seed;
    spec.coupling_end = coupling_end;
    const auto dlg = synth::dialogue(spec);
    std::vector<UtteranceFeaturePoint> points[2];
    std::vector<UtteranceSegment> segments;
    int side = 0;
    for (const auto* samples : {&dlg.tutor, &dlg.participant}) {
      const std::string speaker = side == 0 ? kTutor : kParticipant;
      const auto tracks = analyze_prosody(AudioBuffer(*samples, kRate));
      const auto segs = detect_utterances(tracks.intensity, VadConfig{}, speaker);
      segments.insert(segments.end(), segs.begin(), segs.end());
      points[side++] = aggregate_features(tracks.pitch, tracks.intensity, segs);
    }
    const TimeGrid grid = grid_spanning(segments, 0.1);
    for (Feature f : kAllFeatures) {
      const auto za = zscore(select(points[0], kTutor, f));
      const auto zb = zscore(select(points[1], kParticipant, f));
      StreamConfig cfg;
      cfg.feature = f;
      cfg.t0 = grid.t0();
      cfg.step = grid.step();
      cfg.window_seconds = 30.0;
      cfg.delta = delta;
      std::vector<StreamPoint> merged;
      for (const auto& p : za) merged.push_back({p.time, p.value, kTutor});
      for (const auto& p : zb) merged.push_back({p.time, p.value, kParticipant});
      std::stable_sort(merged.begin(), merged.end(), [](auto& x, auto& y) { return x.time < y.time; });

      StreamingEntrainment stream(cfg);
      std::vector<WindowMetrics> out;
      for (const auto& p : merged) {
        for (auto& m : stream.update(p)) out.push_back(m);
      }
      for (auto& m : stream.flush(grid.t_end())) out.push_back(m);
      counts_ok = counts_ok && out.size() == grid.size();

      const auto a = knn_regress(za, grid, cfg.k);
      const auto b = knn_regress(zb, grid, cfg.k);
      const long lag = std::lround(delta / grid.step());
      for (const auto& m : out) {
        ++emissions;
        const std::size_t j = m.grid_index;
        const std::size_t cap = stream.window_capacity();
        const std::size_t lo = j + 1 >= cap ? j + 1 - cap : 0;
        if (j - lo + 1 < 3) continue;
        const auto wa = make_track({a.values.begin() + lo, a.values.begin() + j + 1}, grid.at(lo), grid.step(), f);
        const auto wb = make_track({b.values.begin() + lo, b.values.begin() + j + 1}, grid.at(lo), grid.step(), f);
        auto check = [&](const std::optional<CorrelationResult>& got, auto&& batch) {
          try {
            const CorrelationResult ref = batch();
            ++compared;
            if (!got) {
              worst = INFINITY;
              return;
            }
            worst = std::max({worst, std::abs(got->r - ref.r), std::abs(got->p_value - ref.p_value)});
          } catch (const Error&) {
            if (got) worst = INFINITY;  // batch undefined, stream reported a value
          }
        };
        check(m.convergence, [&] { return convergence(wa, wb); });
        check(m.synchrony, [&] { return synchrony_at(wa, wb, lag); });
      }
    }
  }
  v.detail << compared << " window metrics at " << emissions << " emissions, max |stream - batch| " << worst;
  v.require(counts_ok, "one emission per grid point");
  v.require(compared > 1000, "enough windows compared");
  v.require(worst <= kStreamTol, "within 1e-9");
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ENTRAIN_CLI) + " " + args + " 2>/dev/null";
  return std::system(cmd.c_str());
}

bool same_tree(const fs::path& a, const fs::path& b, std::size_t& files) {
  files = 0;
  std::size_t other = 0;
  for (const auto& e : fs::recursive_directory_iterator(b)) other += e.is_regular_file();
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++files;
    if (testing::slurp(e.path()) != testing::slurp(b / fs::relative(e.path(), a))) return false;
  }
  return files == other && files > 0;
}

// 9. Determinism of `analyze` and the ten-minute budget.
void determinism(Verdict& v) {
  TempDir dir;
  std::string manifest = R"({"config": {"alpha": 0.01}, "dyads": [)";
  for (int i = 0; i < 4; ++i) {
    synth::DialogueSpec spec;
    spec.duration = 60.0;
    spec.seed = 900 + static_cast<std::uint64_t>(i);
    spec.coupling_end = i % 2 ? 0.9 : 0.0;
    const std::string id = "s" + std::to_string(i);
    synth::write_dialogue(synth::dialogue(spec), spec.sample_rate, dir.path() / id);
    manifest += std::string(i ? "," : "") + R"({"id": ")" + id + R"(", "condition": ")" +
                (i % 2 ? "human" : "robot") + R"(", "tutor_audio": ")" + id +
                R"(/tutor.wav", "participant_audio": ")" + id + R"(/participant.wav"})";
  }
  manifest += "]}";
  std::ofstream(dir / "study.json") << manifest;
  const std::string m = (dir / "study.json").string();
  const int rc1 = run_cli("analyze --manifest " + m + " --out " + (dir / "run1").string());
  const int rc2 = run_cli("analyze --manifest " + m + " --out " + (dir / "run2").string() + " --workers 3");
  std::size_t files = 0;
  const bool identical = rc1 == 0 && rc2 == 0 && same_tree(dir / "run1", dir / "run2", files);

  synth::DialogueSpec spec;
  spec.duration = 600.0;
  spec.seed = 1234;
  spec.coupling_end = 0.9;
  synth::write_dialogue(synth::dialogue(spec), spec.sample_rate, dir / "long");
  std::ofstream(dir / "long.json")
      << R"({"dyads": [{"id": "long", "condition": "human", "tutor_audio": "long/tutor.wav", "participant_audio": "long/participant.wav"}]})";
  const auto start = Clock::now();
  const int rc3 = run_cli("analyze --manifest " + (dir / "long.json").string() + " --out " +
                          (dir / "long_out").string() + " --workers 1");
  const double elapsed = seconds_since(start);

  v.detail << files << " output files byte-identical across runs: " << (identical ? "yes" : "no")
           << "; 10-minute dyad analyzed in " << elapsed << " s";
  v.require(identical, "byte-identical outputs");
  v.require(rc3 == 0, "10-minute analysis succeeded");
  v.require(elapsed < kTenMinuteBudget, "10-minute analysis < 10 s");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Verdict&)>>> criteria{
      {"metric identities", metric_identities},
      {"convergence oracle", convergence_oracle},
      {"lag recovery", lag_recovery},
      {"knn equivalence", knn_equivalence},
      {"statistics calibration", statistics_calibration},
      {"pitch accuracy", pitch_accuracy},
      {"classification echo", classification_echo},
      {"streaming/batch equivalence", streaming_equivalence},
      {"determinism and runtime", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    failures += !v.pass;
    std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
