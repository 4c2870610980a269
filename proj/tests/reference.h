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

// Independent reference implementations used only by the tests. Each one is
// the slow textbook formula, written without the library's fast paths.

#ifndef TNSHAP_TESTS_REFERENCE_H_
#define TNSHAP_TESTS_REFERENCE_H_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "tnshap/lift.h"
#include "tnshap/oracle.h"
#include "tnshap/teachers.h"
#include "tnshap/tensor_network.h"

namespace tnshap::testing {

// Sparse multilinear function sum_T c_T prod_{i in T} x_i; masks use bit i
// for feature i (0-based).
using Terms = std::map<std::uint64_t, double>;

inline double Factorial(std::size_t n) { return std::tgamma(static_cast<double>(n) + 1.0); }

inline double EvalTerms(const Terms& terms, const std::vector<double>& x) {
  double total = 0.0;
  for (const auto& [mask, c] : terms) {
    double term = c;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (mask >> i & 1) term *= x[i];
    }
    total += term;
  }
  return total;
}

// Exact TN for `terms` under binary lifts: one CP component per monomial.
inline TensorNetworkModel TermsModel(std::size_t n, const Terms& terms) {
  CpTeacher cp;
  cp.n = n;
  cp.rank = std::max<std::size_t>(terms.size(), 1);
  for (std::size_t i = 0; i < n; ++i) cp.factors.emplace_back(std::vector<std::size_t>{cp.rank, 2});
  cp.weights.assign(cp.rank, 0.0);
  std::size_t r = 0;
  for (const auto& [mask, c] : terms) {
    cp.weights[r] = c;
    for (std::size_t i = 0; i < n; ++i) {
      const bool on = mask >> i & 1;
      cp.factors[i][r * 2 + 0] = on ? 1.0 : 0.0;
      cp.factors[i][r * 2 + 1] = on ? 0.0 : 1.0;
    }
    ++r;
  }
  if (terms.empty()) {
    for (std::size_t i = 0; i < n; ++i) cp.factors[i][1] = 1.0;
  }
  return cp.ToTensorTrain();
}

// Coalition table of `terms` at x by direct evaluation (off features are 0).
inline CoalitionTable TermsTable(std::size_t n, const Terms& terms,
                                 const std::vector<double>& x) {
  CoalitionTable t;
  t.n = n;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<double> z(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) z[i] = x[i];
    }
    t.values.push_back(EvalTerms(terms, z));
  }
  return t;
}

inline Terms RandomTerms(std::size_t n, std::size_t count, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> mask((0), (std::uint64_t{1} << n) - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  Terms terms;
  for (std::size_t i = 0; i < count; ++i) terms[mask(rng)] += normal(rng);
  return terms;
}

// Random cores of the given topology, entries uniform in [-1, 1].
inline TensorNetworkModel RandomModel(const TnTopology& topo, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<DenseTensor> cores;
  for (const auto& shape : topo.CoreShapes()) {
    DenseTensor c(shape);
    for (double& v : c.data()) v = u(rng);
    cores.push_back(std::move(c));
  }
  return TensorNetworkModel(topo, std::move(cores));
}

inline std::vector<double> RandomPoint(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return x;
}

// Average marginal contribution over all n! orderings.
inline std::vector<double> PermutationShapley(const CoalitionTable& t) {
  std::vector<std::size_t> order(t.n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phi(t.n, 0.0);
  double count = 0.0;
  do {
    std::uint64_t mask = 0;
    for (std::size_t i : order) {
      phi[i] += t[mask | (std::uint64_t{1} << i)] - t[mask];
      mask |= std::uint64_t{1} << i;
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& v : phi) v /= count;
  return phi;
}

// Shapley interaction index of subset `s` from the defining double sum.
inline double DefinitionSii(const CoalitionTable& t, std::uint64_t s) {
  const std::size_t n = t.n;
  const std::size_t k = static_cast<std::size_t>(std::popcount(s));
  double total = 0.0;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) {
    if (c & s) continue;
    const std::size_t size = static_cast<std::size_t>(std::popcount(c));
    const double w = Factorial(size) * Factorial(n - k - size) / Factorial(n - k + 1);
    double delta = 0.0;
    for (std::uint64_t l = 0; l < (std::uint64_t{1} << n); ++l) {
      if ((l & ~s) != 0) continue;
      const int sign = (k - std::popcount(l)) % 2 ? -1 : 1;
      delta += sign * t[c | l];
    }
    total += w * delta;
  }
  return total;
}

// Naive 4^n Mobius inversion.
inline std::vector<double> NaiveMobius(const CoalitionTable& t) {
  const std::uint64_t size = std::uint64_t{1} << t.n;
  std::vector<double> c(size, 0.0);
  for (std::uint64_t a = 0; a < size; ++a) {
    for (std::uint64_t l = 0; l < size; ++l) {
      if ((l & ~a) != 0) continue;
      c[a] += ((std::popcount(a) - std::popcount(l)) % 2 ? -1.0 : 1.0) * t[l];
    }
  }
  return c;
}

// sum over every multi-index of T[idx] prod_i inputs[i][idx_i].
inline double NaiveContraction(const DenseTensor& t,
                               const std::vector<std::vector<double>>& inputs) {
  double total = 0.0;
  std::vector<std::size_t> idx(t.rank(), 0);
  for (std::size_t f = 0; f < t.size(); ++f) {
    double p = t[f];
    for (std::size_t a = 0; a < t.rank(); ++a) p *= inputs[a][idx[a]];
    total += p;
    for (std::size_t a = t.rank(); a-- > 0;) {
      if (++idx[a] < t.extent(a)) break;
      idx[a] = 0;
    }
  }
  return total;
}

inline std::uint64_t MaskOf(const std::vector<std::size_t>& subset) {
  std::uint64_t m = 0;
  for (std::size_t i : subset) m |= std::uint64_t{1} << i;
  return m;
}

}  // namespace tnshap::testing

#endif  // TNSHAP_TESTS_REFERENCE_H_
