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

#ifndef TNSHAP_ATTRIBUTE_H_
#define TNSHAP_ATTRIBUTE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tnshap/interpolation.h"
#include "tnshap/lift.h"
#include "tnshap/tensor_network.h"

namespace tnshap {

// How the k target legs of a probe are handled.
//   kInclusionExclusion: 2^k forwards, one per on/off pattern, signed sum.
//   kSignedToggle: one forward with (S(1) - S(0)) on each target leg.
//   kAuto: inclusion-exclusion for k = 1, signed toggle for k >= 2.
enum class ProbeMode { kAuto, kInclusionExclusion, kSignedToggle };

ProbeMode ResolveMode(ProbeMode mode, std::size_t k);
std::string ModeName(ProbeMode mode);
// Accepts "auto", "ie", "inclusion-exclusion", "st", "signed-toggle".
ProbeMode ParseMode(const std::string& text);

using Subset = std::vector<std::size_t>;  // sorted 0-based feature indices

struct AttributionEntry {
  Subset subset;
  double value = 0.0;
  bool ill_conditioned = false;

  bool operator==(const AttributionEntry&) const = default;
};

// Order-k indices for one instance. k = 1 holds Shapley values.
struct AttributionSet {
  std::size_t order = 0;
  std::vector<AttributionEntry> entries;
  std::uint64_t forwards_used = 0;
  double max_solve_residual = 0.0;

  bool operator==(const AttributionSet&) const = default;
};

// All size-k subsets of {0..n-1} in lexicographic order.
std::vector<Subset> AllSubsets(std::size_t n, std::size_t k);

// Forwards needed per subset: 2^k (n-k+1) for inclusion-exclusion,
// n-k+1 for signed toggle.
std::uint64_t ForwardsPerSubset(std::size_t n, std::size_t k, ProbeMode mode);

// Q_S(t; x): the k-th order discrete derivative over S with every other leg
// scaled by S(t). `forwards`, when given, is incremented by the number of
// network evaluations performed.
double ProbeValue(const TensorNetworkModel& model, const FeatureMaps& maps,
                  std::span<const double> x, std::span<const std::size_t> subset,
                  double t, ProbeMode mode, std::uint64_t* forwards = nullptr);

// Same probe on an already-lifted instance.
double ProbeLifted(const TensorNetworkModel& model, const LiftedInstance& lifted,
                   std::span<const std::size_t> subset, double t, ProbeMode mode,
                   std::uint64_t* forwards = nullptr);

// Explains one instance. Each subset uses m = n-k+1 Chebyshev nodes. When
// `plan` is given it must have exactly n-k+1 nodes.
AttributionSet Explain(const TensorNetworkModel& model, const FeatureMaps& maps,
                       std::span<const double> x, std::size_t k,
                       ProbeMode mode = ProbeMode::kAuto,
                       const ProbePlan* plan = nullptr);

AttributionSet Explain(const TensorNetworkModel& model, const FeatureMaps& maps,
                       std::span<const double> x, std::size_t k,
                       std::span<const Subset> subsets, ProbeMode mode,
                       const ProbePlan* plan = nullptr);

struct BatchItem {
  std::optional<AttributionSet> result;
  std::string error;  // set when result is empty
};

// Explains every instance with one shared probe plan. A failing instance is
// reported in its slot; the others still run.
std::vector<BatchItem> ExplainBatch(const TensorNetworkModel& model,
                                    const FeatureMaps& maps,
                                    std::span<const std::vector<double>> instances,
                                    std::size_t k, ProbeMode mode = ProbeMode::kAuto);

}  // namespace tnshap

#endif  // TNSHAP_ATTRIBUTE_H_
