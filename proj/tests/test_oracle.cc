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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "reference.h"
#include "tnshap/errors.h"
#include "tnshap/oracle.h"
#include "tnshap/weights.h"

namespace tnshap {
namespace {

using testing::Terms;

TEST_CASE("enumeration of x1 x2") {
  const auto m = testing::TermsModel(2, {{0b11, 1.0}});
  const CoalitionTable t = EnumerateGame(m, BinaryMaps(2), std::vector<double>{1.0, 1.0});
  CHECK(t.values == std::vector<double>{0.0, 0.0, 0.0, 1.0});
  const auto phi = ExactShapley(t);
  CHECK(phi[0] == doctest::Approx(0.5));
  CHECK(phi[1] == doctest::Approx(0.5));
  CHECK(ExactSii(t, 2).entries[0].value == doctest::Approx(1.0));
}

TEST_CASE("shapley matches permutation averages") {
  std::mt19937_64 rng(31);
  for (std::size_t n = 1; n <= 7; ++n) {
    const Terms terms = testing::RandomTerms(n, 8, rng);
    const CoalitionTable t = testing::TermsTable(n, terms, testing::RandomPoint(n, rng));
    const auto fast = ExactShapley(t);
    const auto slow = testing::PermutationShapley(t);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(fast[i] - slow[i]) < 1e-10);
  }
}

TEST_CASE("sii matches the defining sum") {
  std::mt19937_64 rng(32);
  for (std::size_t n = 2; n <= 7; ++n) {
    const CoalitionTable t =
        testing::TermsTable(n, testing::RandomTerms(n, 10, rng), testing::RandomPoint(n, rng));
    for (std::size_t k = 1; k <= std::min<std::size_t>(n, 3); ++k) {
      for (const auto& e : ExactSii(t, k).entries) {
        CHECK(std::abs(e.value - testing::DefinitionSii(t, testing::MaskOf(e.subset))) < 1e-10);
      }
    }
  }
}

TEST_CASE("mobius transform and its inverse") {
  std::mt19937_64 rng(33);
  for (std::size_t n = 0; n <= 8; ++n) {
    CoalitionTable t;
    t.n = n;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) t.values.push_back(u(rng));
    const auto fast = MobiusCoefficients(t);
    const auto slow = testing::NaiveMobius(t);
    for (std::size_t s = 0; s < fast.size(); ++s) CHECK(std::abs(fast[s] - slow[s]) < 1e-12);
    const auto back = ZetaTransform(fast);
    for (std::size_t s = 0; s < back.size(); ++s) CHECK(std::abs(back[s] - t.values[s]) < 1e-12);
  }
}

TEST_CASE("mobius of a sparse polynomial recovers its terms") {
  const Terms terms{{0b000, 0.25}, {0b011, 2.0}, {0b101, -0.5}, {0b111, 1.5}};
  const std::vector<double> x{0.5, -2.0, 4.0};
  const auto d = MobiusCoefficients(testing::TermsTable(3, terms, x));
  CHECK(d[0] == doctest::Approx(0.25));
  CHECK(d[0b011] == doctest::Approx(2.0 * 0.5 * -2.0));
  CHECK(d[0b101] == doctest::Approx(-0.5 * 0.5 * 4.0));
  CHECK(d[0b111] == doctest::Approx(1.5 * 0.5 * -2.0 * 4.0));
  CHECK(d[0b001] == 0.0);
  const auto agg = SizeAggregates(d, 3);
  CHECK(agg[0] == doctest::Approx(0.25));
  CHECK(agg[1] == 0.0);
  CHECK(agg[2] == doctest::Approx(-2.0 - 1.0));
  CHECK(agg[3] == doctest::Approx(-6.0));
}

TEST_CASE("diagonal probe matches mobius size sums") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 8;
    const auto m = testing::RandomModel(
        TnTopology::BinaryTree(std::vector<std::size_t>(n, 2), 3), rng);
    const auto maps = BinaryMaps(n);
    const auto x = testing::RandomPoint(n, rng);
    const auto probe = DiagonalCoefficientProbe(m, maps, x, ProbePlan::Chebyshev(n + 1));
    const auto agg = SizeAggregates(MobiusCoefficients(EnumerateGame(m, maps, x)), n);
    REQUIRE(probe.size_sums.size() == n + 1);
    for (std::size_t s = 0; s <= n; ++s) CHECK(std::abs(probe.size_sums[s] - agg[s]) < 1e-8);
    CHECK_FALSE(probe.ill_conditioned);
  }
  const auto m = testing::TermsModel(3, {{0b1, 1.0}});
  CHECK_THROWS_AS(DiagonalCoefficientProbe(m, BinaryMaps(3), std::vector<double>{1, 1, 1},
                                           ProbePlan::Chebyshev(3)),
                  InvalidArgument);
}

TEST_CASE("enumeration uses one forward per coalition") {
  std::mt19937_64 rng(35);
  const auto m =
      testing::RandomModel(TnTopology::TensorTrain(std::vector<std::size_t>(6, 2), 2), rng);
  m.ResetForwardCount();
  EnumerateGame(m, BinaryMaps(6), testing::RandomPoint(6, rng));
  CHECK(m.forward_count() == 64);
}

TEST_CASE("enumeration refuses large games") {
  const auto m = testing::TermsModel(5, {{0b1, 1.0}});
  const std::vector<double> x(5, 1.0);
  CHECK_THROWS_AS(EnumerateGame(m, BinaryMaps(5), x, 4), SizeLimitExceeded);
  CHECK_NOTHROW(EnumerateGame(m, BinaryMaps(5), x, 5));
}

TEST_CASE("table dump round trip") {
  const CoalitionTable t = testing::TermsTable(3, {{0b101, 1.0 / 3.0}, {0, 0.1}},
                                               std::vector<double>{0.7, 0.2, -0.3});
  std::stringstream ss;
  WriteTableDump(ss, t);
  const CoalitionTable back = ReadTableDump(ss);
  CHECK(back.n == 3);
  CHECK(back.values == t.values);
  std::stringstream bad("coalition,value\n0,1.0\n");
  CHECK_THROWS(ReadTableDump(bad));
}

}  // namespace
}  // namespace tnshap
