// Copyright 2026 The tnshap Authors.
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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "tnshap/errors.h"
#include "tnshap/interpolation.h"
#include "tnshap/weights.h"

namespace tnshap {
namespace {

TEST_CASE("chebyshev node examples") {
  CHECK(ChebyshevNodes(1) == std::vector<double>{0.5});
  const auto two = ChebyshevNodes(2);
  CHECK(two[0] == doctest::Approx(0.8535533905932737).epsilon(1e-15));
  CHECK(two[1] == doctest::Approx(0.1464466094067262).epsilon(1e-15));
  for (std::size_t m : {4u, 7u, 30u}) {
    const auto t = ChebyshevNodes(m);
    for (std::size_t l = 0; l < m; ++l) {
      CHECK(t[l] > 0.0);
      CHECK(t[l] < 1.0);
      CHECK(t[l] + t[m - 1 - l] == doctest::Approx(1.0).epsilon(1e-14));
      if (l > 0) CHECK(t[l] < t[l - 1]);
    }
  }
  CHECK_THROWS_AS(ChebyshevNodes(0), InvalidArgument);
}

TEST_CASE("probe plan recovers polynomial coefficients") {
  for (std::size_t m : {1u, 2u, 5u, 12u, 20u}) {
    const ProbePlan plan = ProbePlan::Chebyshev(m);
    std::vector<double> coeffs(m);
    for (std::size_t s = 0; s < m; ++s) coeffs[s] = std::cos(1.0 + 3.0 * s);
    std::vector<double> values;
    for (double t : plan.nodes()) {
      double p = 0.0;
      for (std::size_t s = m; s-- > 0;) p = p * t + coeffs[s];
      values.push_back(p);
    }
    const auto sol = plan.Solve(values);
    const double tol = m <= 12 ? 1e-9 : 1e-3;
    for (std::size_t s = 0; s < m; ++s) CHECK(std::abs(sol.coefficients[s] - coeffs[s]) < tol);
    CHECK(sol.residual < 1e-12);
    CHECK(plan.condition_estimate() >= 1.0);
  }
}

TEST_CASE("probe plan rejects repeated nodes") {
  CHECK_THROWS_AS(ProbePlan({0.2, 0.5, 0.2}), InvalidArgument);
  CHECK_THROWS_AS(ProbePlan({0.3, 0.3 + 1e-14}), InvalidArgument);
  CHECK_THROWS_AS(ProbePlan(std::vector<double>{}), InvalidArgument);
  const ProbePlan plan({0.2, 0.5});
  CHECK_THROWS_AS(plan.Solve(std::vector<double>{1.0}), InvalidArgument);
}

TEST_CASE("conditioning grows with the node count") {
  CHECK(ProbePlan::Chebyshev(20).condition_estimate() >
        ProbePlan::Chebyshev(10).condition_estimate());
}

TEST_CASE("shapley weight examples") {
  const auto w3 = ShapleyWeights(3);
  REQUIRE(w3.size() == 3);
  CHECK(w3[0] == doctest::Approx(1.0 / 3));
  CHECK(w3[1] == doctest::Approx(1.0 / 6));
  CHECK(w3[2] == doctest::Approx(1.0 / 3));
  CHECK(ShapleyWeights(1) == std::vector<double>{1.0});
  const auto w2 = ShapleyWeights(2);
  CHECK(w2[0] == doctest::Approx(0.5));
  CHECK(w2[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(ShapleyWeights(0), InvalidArgument);
  CHECK_THROWS_AS(ShapleyWeights(kMaxWeightFeatures + 1), InvalidArgument);
}

TEST_CASE("weights normalize") {
  for (std::size_t n = 1; n <= 60; ++n) {
    for (std::size_t k = 1; k <= std::min<std::size_t>(n, 4); ++k) {
      const auto b = SiiWeights(n, k);
      CHECK(b.size() == n - k + 1);
      double sum = 0.0;
      for (std::size_t s = 0; s < b.size(); ++s) {
        CHECK(b[s] > 0.0);
        sum += b[s] * Binomial(n - k, s);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("sii weight examples") {
  const auto b = SiiWeights(4, 2);
  CHECK(b[0] == doctest::Approx(1.0 / 3));
  CHECK(b[1] == doctest::Approx(1.0 / 6));
  CHECK(b[2] == doctest::Approx(1.0 / 3));
  CHECK(SiiWeights(5, 5) == std::vector<double>{1.0});
  CHECK(SiiWeights(3, 1) == ShapleyWeights(3));
  CHECK_THROWS_AS(SiiWeights(3, 4), InvalidArgument);
  CHECK_THROWS_AS(SiiWeights(3, 0), InvalidArgument);
  // Factorial formula for a mid-size case.
  const auto w = ShapleyWeights(20);
  for (std::size_t s = 0; s < 20; ++s) {
    const double f = std::tgamma(s + 1.0) * std::tgamma(20.0 - s) / std::tgamma(21.0);
    CHECK(w[s] == doctest::Approx(f).epsilon(1e-13));
  }
}

TEST_CASE("power coefficients convert to marginal sums") {
  // Q(t) = sum_C t^|C| (1 - t)^(m - |C|) D(C) with per-size sums M_s.
  const std::vector<double> marginal{0.5, -1.0, 2.0, 0.25};
  const std::size_t m = marginal.size() - 1;
  // Expand each Bernstein term into powers of t.
  std::vector<double> power(m + 1, 0.0);
  for (std::size_t s = 0; s <= m; ++s) {
    for (std::size_t j = 0; j <= m - s; ++j) {
      const double sign = j % 2 ? -1.0 : 1.0;
      power[s + j] += marginal[s] * sign * Binomial(m - s, j);
    }
  }
  const auto back = PowerToMarginalSums(power);
  for (std::size_t s = 0; s <= m; ++s) CHECK(back[s] == doctest::Approx(marginal[s]));
}

TEST_CASE("binomial") {
  CHECK(Binomial(5, 2) == 10.0);
  CHECK(Binomial(5, 0) == 1.0);
  CHECK(Binomial(3, 5) == 0.0);
  CHECK(Binomial(50, 25) == 126410606437752.0);
}

}  // namespace
}  // namespace tnshap
