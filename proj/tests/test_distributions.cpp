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

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "entrain/distributions.hpp"

namespace entrain {
namespace {

namespace bm = boost::math;

// Relative agreement, with an absolute floor for values near zero.
void expect_close(double got, double want, double rel = 1e-10, double abs_floor = 1e-300) {
  EXPECT_LE(std::abs(got - want), rel * std::abs(want) + abs_floor) << "got " << got << " want " << want;
}

const double kShapes[] = {0.05, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 25.0, 100.0, 1000.0};
const double kPoints[] = {1e-6, 0.01, 0.3, 1.0, 2.5, 7.0, 20.0, 60.0, 200.0, 1500.0};

TEST(IncompleteGamma, MatchesBoost) {
  for (double a : kShapes) {
    for (double x : kPoints) {
      const double p = bm::gamma_p(a, x);
      const double q = bm::gamma_q(a, x);
      if (p > 1e-280) expect_close(dist::gamma_p(a, x), p);
      if (q > 1e-280) expect_close(dist::gamma_q(a, x), q);
    }
  }
  EXPECT_EQ(dist::gamma_p(2.0, 0.0), 0.0);
  EXPECT_EQ(dist::gamma_q(2.0, 0.0), 1.0);
}

TEST(IncompleteBeta, MatchesBoost) {
  for (double a : {0.1, 0.5, 1.0, 2.0, 7.5, 30.0, 400.0}) {
    for (double b : {0.1, 0.5, 1.0, 3.0, 12.0, 250.0}) {
      for (double x : {1e-8, 0.001, 0.1, 0.35, 0.5, 0.77, 0.99, 0.999999}) {
        const double want = bm::ibeta(a, b, x);
        if (want > 1e-280) expect_close(dist::beta_inc(a, b, x), want);
      }
    }
  }
  EXPECT_EQ(dist::beta_inc(2.0, 3.0, 0.0), 0.0);
  EXPECT_EQ(dist::beta_inc(2.0, 3.0, 1.0), 1.0);
}

TEST(Normal, CdfAndQuantile) {
  bm::normal n;
  for (double z = -37.0; z <= 8.0; z += 0.25) {
    expect_close(dist::normal_cdf(z), bm::cdf(n, z));
    expect_close(dist::normal_sf(-z), bm::cdf(n, z));
  }
  for (double p : {1e-300, 1e-100, 1e-20, 1e-8, 0.001, 0.025, 0.1, 0.5, 0.8, 0.975, 0.999, 1 - 1e-12}) {
    expect_close(dist::normal_quantile(p), bm::quantile(n, p), 1e-10, 1e-15);
  }
  EXPECT_EQ(dist::normal_quantile(0.5), 0.0);
}

TEST(StudentT, MatchesBoost) {
  for (double df : {1.0, 2.0, 3.0, 4.5, 10.0, 41.0, 98.0, 1000.0, 1e5}) {
    bm::students_t t(df);
    for (double x : {-50.0, -6.0, -2.0, -0.5, 0.0, 0.3, 1.7, 3.0, 8.0, 40.0}) {
      expect_close(dist::student_t_cdf(x, df), bm::cdf(t, x));
      expect_close(dist::student_t_two_sided(x, df), 2.0 * bm::cdf(bm::complement(t, std::abs(x))));
    }
  }
}

TEST(ChiSquare, MatchesBoost) {
  for (double df : {1.0, 2.0, 3.0, 5.0, 11.0, 50.0}) {
    bm::chi_squared c(df);
    for (double x : {0.001, 0.5, 1.0, 3.857, 9.0, 30.0, 120.0}) {
      const double want = bm::cdf(bm::complement(c, x));
      if (want > 1e-280) expect_close(dist::chi_square_sf(x, df), want);
    }
  }
}

TEST(FisherF, MatchesBoost) {
  for (double d1 : {1.0, 2.0, 5.0}) {
    for (double d2 : {3.0, 10.0, 38.0, 200.0}) {
      bm::fisher_f f(d1, d2);
      for (double x : {0.01, 0.4, 1.0, 2.2, 7.5, 40.0}) {
        expect_close(dist::f_sf(x, d1, d2), bm::cdf(bm::complement(f, x)));
      }
    }
  }
  EXPECT_EQ(dist::f_sf(0.0, 2.0, 10.0), 1.0);
}

}  // namespace
}  // namespace entrain
