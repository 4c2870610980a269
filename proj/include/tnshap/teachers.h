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

#ifndef TNSHAP_TEACHERS_H_
#define TNSHAP_TEACHERS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tnshap/dense_tensor.h"
#include "tnshap/lift.h"
#include "tnshap/tensor_network.h"

namespace tnshap {

// Rank-R CP multilinear function on lifted inputs:
//   f(x~) = sum_r w_r prod_i <factors[i](r, :), x~_i>
struct CpTeacher {
  std::size_t n = 0;
  std::size_t rank = 0;
  std::vector<DenseTensor> factors;  // factors[i] has shape (rank, d_i)
  std::vector<double> weights;       // length rank

  double Evaluate(std::span<const std::vector<double>> lifted) const;

  // Exact tensor-train form with bond dimension `rank` (diagonal middle
  // cores, weights folded into the first core).
  TensorNetworkModel ToTensorTrain() const;
};

// Standard-normal factors, weights rescaled so outputs over 1024 uniform
// samples in [-1, 1]^n have unit standard deviation. Deterministic in `seed`.
CpTeacher GenCpTeacher(std::size_t n, std::size_t rank, std::uint64_t seed,
                       const FeatureMaps& maps);

// Balanced binary tree with every bond equal to `bond`. Cores are standard
// normal divided by sqrt(fan-in), then the root is rescaled to unit output
// standard deviation as above.
TensorNetworkModel GenTreeTeacher(std::size_t n, std::size_t bond,
                                  std::uint64_t seed, const FeatureMaps& maps);

// Standard deviation of model outputs over `samples` uniform draws in
// [-1, 1]^n (lifted with `maps`).
double OutputStd(const TensorNetworkModel& model, const FeatureMaps& maps,
                 std::size_t samples, std::uint64_t seed);

}  // namespace tnshap

#endif  // TNSHAP_TEACHERS_H_
