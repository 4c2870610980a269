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

#ifndef TNSHAP_INTERPOLATION_H_
#define TNSHAP_INTERPOLATION_H_

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace tnshap {

// Chebyshev-Gauss nodes mapped to (0, 1):
//   t_l = (1 + cos((2l + 1) pi / 2m)) / 2,  l = 0..m-1   (descending)
std::vector<double> ChebyshevNodes(std::size_t m);

// Interpolation nodes together with the monomial Vandermonde matrix
// V[l][s] = t_l^s and its QR factorization. Building one is O(m^3); solving
// against it is O(m^2). Copies share the factorization read-only.
class ProbePlan {
 public:
  // Nodes must be pairwise distinct (gap > 1e-12).
  explicit ProbePlan(std::vector<double> nodes);

  static ProbePlan Chebyshev(std::size_t m) { return ProbePlan(ChebyshevNodes(m)); }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  // 2-norm condition number of V.
  double condition_estimate() const;

  struct Solution {
    std::vector<double> coefficients;  // power-basis coefficients c_0..c_{m-1}
    double residual = 0.0;             // ||V c - q||_inf after refinement
  };

  // Solves V c = values with one step of iterative refinement.
  Solution Solve(std::span<const double> values) const;

 private:
  struct Factorization;
  std::vector<double> nodes_;
  std::shared_ptr<const Factorization> factorization_;
};

// A solve is flagged when its residual, relative to max(1, ||q||_inf),
// exceeds this.
inline constexpr double kIllConditionedResidual = 1e-6;
// Above this many nodes the monomial basis loses accuracy quickly.
inline constexpr std::size_t kConditioningWarnNodes = 30;

}  // namespace tnshap

#endif  // TNSHAP_INTERPOLATION_H_
