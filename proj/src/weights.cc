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

#include "tnshap/weights.h"

#include <cmath>
#include <string>

#include "tnshap/errors.h"

namespace tnshap {

std::vector<double> ShapleyWeights(std::size_t n) { return SiiWeights(n, 1); }

std::vector<double> SiiWeights(std::size_t n, std::size_t k) {
  if (n < 1 || n > kMaxWeightFeatures) {
    throw InvalidArgument("weights support 1 <= n <= " +
                          std::to_string(kMaxWeightFeatures) + ", got " +
                          std::to_string(n));
  }
  if (k < 1 || k > n) {
    throw InvalidArgument("interaction order k = " + std::to_string(k) +
                          " outside [1, n = " + std::to_string(n) + "]");
  }
  const std::size_t m = n - k;
  std::vector<double> beta(m + 1);
  // beta_0 = m! / (m+1)! = 1/(m+1); beta_{s+1} = beta_s (s+1) / (m-s).
  beta[0] = 1.0 / static_cast<double>(m + 1);
  for (std::size_t s = 0; s < m; ++s) {
    beta[s + 1] = beta[s] * static_cast<double>(s + 1) / static_cast<double>(m - s);
  }
  return beta;
}

double Binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (std::size_t j = 1; j <= k; ++j) {
    result = result * static_cast<double>(n - k + j) / static_cast<double>(j);
  }
  return std::round(result);
}

std::vector<double> PowerToMarginalSums(std::span<const double> power) {
  if (power.empty()) return {};
  const std::size_t m = power.size() - 1;
  std::vector<double> marginal(m + 1, 0.0);
  for (std::size_t s = 0; s <= m; ++s) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= s; ++j) acc += Binomial(m - j, s - j) * power[j];
    marginal[s] = acc;
  }
  return marginal;
}

}  // namespace tnshap
