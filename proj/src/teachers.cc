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

#include "tnshap/teachers.h"

#include <cmath>
#include <random>

#include "tnshap/errors.h"

namespace tnshap {
namespace {

constexpr std::size_t kScaleSamples = 1024;
// Keeps the output-scale sample stream apart from the parameter stream.
constexpr std::uint64_t kScaleStream = 0x5DEECE66DULL;

DenseTensor RandomTensor(std::vector<std::size_t> shape, double scale,
                         std::mt19937_64& rng) {
  DenseTensor t(std::move(shape));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : t.data()) v = scale * normal(rng);
  return t;
}

void CheckMaps(std::size_t n, const FeatureMaps& maps) {
  if (n == 0) throw InvalidArgument("teacher needs n >= 1");
  if (maps.size() != n) throw InvalidArgument("feature maps must cover n features");
}

}  // namespace

double CpTeacher::Evaluate(std::span<const std::vector<double>> lifted) const {
  if (lifted.size() != n) throw InvalidArgument("CP teacher input count mismatch");
  double total = 0.0;
  for (std::size_t r = 0; r < rank; ++r) {
    double term = weights[r];
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t d = factors[i].extent(1);
      if (lifted[i].size() != d) throw DimensionMismatch(i, d, lifted[i].size());
      double dot = 0.0;
      for (std::size_t p = 0; p < d; ++p) dot += factors[i][r * d + p] * lifted[i][p];
      term *= dot;
    }
    total += term;
  }
  return total;
}

TensorNetworkModel CpTeacher::ToTensorTrain() const {
  std::vector<std::size_t> dims;
  for (const DenseTensor& f : factors) dims.push_back(f.extent(1));
  const TnTopology topo = TnTopology::TensorTrain(dims, rank);
  std::vector<DenseTensor> cores;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t d = dims[i];
    const std::size_t left = i == 0 ? 1 : rank;
    const std::size_t right = i + 1 == n ? 1 : rank;
    DenseTensor core({left, d, right});
    for (std::size_t r = 0; r < rank; ++r) {
      const double w = i == 0 ? weights[r] : 1.0;
      const std::size_t a = i == 0 ? 0 : r;
      const std::size_t b = i + 1 == n ? 0 : r;
      for (std::size_t p = 0; p < d; ++p) {
        core[(a * d + p) * right + b] += w * factors[i][r * d + p];
      }
    }
    cores.push_back(std::move(core));
  }
  return TensorNetworkModel(topo, std::move(cores));
}

double OutputStd(const TensorNetworkModel& model, const FeatureMaps& maps,
                 std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<double> x(model.n());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (double& v : x) v = uniform(rng);
    const double y = model.Forward(LiftInstance(maps, x));
    sum += y;
    sum_sq += y * y;
  }
  const double mean = sum / static_cast<double>(samples);
  const double var = sum_sq / static_cast<double>(samples) - mean * mean;
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

CpTeacher GenCpTeacher(std::size_t n, std::size_t rank, std::uint64_t seed,
                       const FeatureMaps& maps) {
  CheckMaps(n, maps);
  if (rank < 1) throw InvalidArgument("CP rank must be >= 1");
  std::mt19937_64 rng(seed);
  CpTeacher teacher;
  teacher.n = n;
  teacher.rank = rank;
  for (std::size_t i = 0; i < n; ++i) {
    teacher.factors.push_back(RandomTensor({rank, maps[i].dim()}, 1.0, rng));
  }
  teacher.weights.assign(rank, 1.0);
  const double sd =
      OutputStd(teacher.ToTensorTrain(), maps, kScaleSamples, seed ^ kScaleStream);
  if (sd > 0.0 && std::isfinite(sd)) {
    for (double& w : teacher.weights) w /= sd;
  }
  return teacher;
}

TensorNetworkModel GenTreeTeacher(std::size_t n, std::size_t bond,
                                  std::uint64_t seed, const FeatureMaps& maps) {
  CheckMaps(n, maps);
  if (bond < 1) throw InvalidArgument("tree bond dimension must be >= 1");
  std::mt19937_64 rng(seed);
  const TnTopology topo = TnTopology::BinaryTree(PhysDims(maps), bond);
  std::vector<DenseTensor> cores;
  const auto shapes = topo.CoreShapes();
  for (std::size_t j = 0; j < shapes.size(); ++j) {
    // Fan-in: every axis except the parent bond (the root has none).
    const std::size_t inputs = j == 0 ? shapes[j].size() : shapes[j].size() - 1;
    std::size_t fan_in = 1;
    for (std::size_t a = 0; a < inputs; ++a) fan_in *= shapes[j][a];
    cores.push_back(
        RandomTensor(shapes[j], 1.0 / std::sqrt(static_cast<double>(fan_in)), rng));
  }
  TensorNetworkModel model(topo, cores);
  const double sd = OutputStd(model, maps, kScaleSamples, seed ^ kScaleStream);
  if (sd > 0.0 && std::isfinite(sd)) {
    cores[0].Scale(1.0 / sd);
    return TensorNetworkModel(topo, std::move(cores));
  }
  return model;
}

}  // namespace tnshap
