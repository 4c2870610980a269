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

#ifndef TNSHAP_WEIGHTS_H_
#define TNSHAP_WEIGHTS_H_

#include <cstddef>
#include <span>
#include <vector>

namespace tnshap {

// Largest feature count the weight recurrences accept.
inline constexpr std::size_t kMaxWeightFeatures = 512;

// alpha_s = s! (n-s-1)! / n!, s = 0..n-1.
std::vector<double> ShapleyWeights(std::size_t n);

// beta_s(n, k) = s! (n-k-s)! / (n-k+1)!, s = 0..n-k. Equals ShapleyWeights(n)
// for k = 1.
std::vector<double> SiiWeights(std::size_t n, std::size_t k);

// Binomial coefficient as a double (exact up to 2^53).
double Binomial(std::size_t n, std::size_t k);

// Probing with every other leg at S(t) gives Q(t) = sum_C t^|C| (1-t)^(m-|C|)
// D(C) over the m remaining features, so its power-basis coefficients a_j are
// size-j sums of Mobius terms. The size-s marginal sums M_s = sum_{|C|=s} D(C)
// follow from
//   M_s = sum_{j<=s} C(m-j, s-j) a_j,   m = power.size() - 1.
std::vector<double> PowerToMarginalSums(std::span<const double> power);

}  // namespace tnshap

#endif  // TNSHAP_WEIGHTS_H_
