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

#ifndef TNSHAP_FIT_H_
#define TNSHAP_FIT_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tnshap/lift.h"
#include "tnshap/tensor_network.h"

namespace tnshap {

struct FitConfig {
  TopologyKind topology = TopologyKind::kBalancedBinaryTree;
  std::size_t bond_dim = 4;
  std::size_t neighborhood_samples = 100;  // M
  bool structured_probes = true;           // adds 2 n^2 rows
  double sigma = 0.1;                      // fraction of feature_std
  double feature_std = 0.57735026918962584;  // std of U[-1, 1]
  double structured_weight = 1.0;
  double neighborhood_weight = 1.0;
  std::size_t max_sweeps = 30;
  double tolerance = 1e-10;  // on train R^2 improvement per sweep
  std::uint64_t seed = 0;

  // Throws InvalidArgument on out-of-range fields.
  void Validate() const;
};

struct TrainingRow {
  std::vector<std::vector<double>> lifted;  // one vector per feature
  double target = 0.0;
  double weight = 1.0;
  bool structured = false;
};

struct TrainingSet {
  std::vector<TrainingRow> rows;
  std::size_t teacher_evaluations = 0;
};

// Scalar on a lifted configuration; TN and CP teachers qualify.
using LiftedFunction =
    std::function<double(std::span<const std::vector<double>>)>;
// Scalar on a raw input point.
using PointFunction = std::function<double(std::span<const double>)>;

// M Gaussian neighbours of x0 plus, for every feature i and every one of n
// Chebyshev nodes t, the on and off configurations at i with every other
// leg scaled by t. Budget is M + 2 n^2 teacher evaluations.
TrainingSet BuildTrainingSet(const LiftedFunction& teacher,
                             const FeatureMaps& maps,
                             std::span<const double> x0,
                             const FitConfig& config);

// Black-box variant: fractional selector scalings cannot be applied to an
// opaque function, so the structured rows use random coalitions where each
// other feature keeps its x0 value with probability t and is set to zero
// otherwise. Same row count and budget.
TrainingSet BuildTrainingSet(const PointFunction& teacher,
                             const FeatureMaps& maps,
                             std::span<const double> x0,
                             const FitConfig& config);

struct QualityMetrics {
  std::size_t order = 0;
  std::size_t count = 0;
  std::optional<double> r2;  // empty when the truth has zero variance
  double cosine = 0.0;
  double mse = 0.0;
};

struct FitReport {
  double train_r2 = 0.0;
  std::vector<double> train_mse_history;  // one entry per sweep
  std::vector<double> train_r2_history;
  std::size_t sweeps = 0;
  bool converged = false;
  std::size_t tikhonov_fallbacks = 0;
  std::size_t training_rows = 0;
  std::size_t teacher_evaluations = 0;
  double wall_seconds = 0.0;
  std::vector<QualityMetrics> quality;  // filled by EvalQuality
};

// ALS over the student's cores. The returned model has the topology given
// by config (topology kind, bond_dim) over the training set's phys dims,
// with bonds passed through TrimBonds.
std::pair<TensorNetworkModel, FitReport> FitStudent(const TrainingSet& data,
                                                   const FitConfig& config);

// Per order: stack the C(n, k) values over every instance from the student
// (interpolation) and the teacher (enumeration oracle) and compare.
std::vector<QualityMetrics> EvalQuality(
    const TensorNetworkModel& student, const TensorNetworkModel& teacher,
    const FeatureMaps& maps, std::span<const std::vector<double>> instances,
    std::span<const std::size_t> orders);

std::optional<double> RSquared(std::span<const double> truth,
                               std::span<const double> predicted);
double CosineSimilarity(std::span<const double> a, std::span<const double> b);
double MeanSquaredError(std::span<const double> a, std::span<const double> b);

}  // namespace tnshap

#endif  // TNSHAP_FIT_H_
