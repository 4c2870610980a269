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

#include "tnshap/attribute.h"

#include <algorithm>
#include <cmath>
#include <bit>
#include <exception>

#include "tnshap/errors.h"
#include "tnshap/parallel.h"
#include "tnshap/weights.h"

namespace tnshap {
namespace {

void CheckSubset(std::span<const std::size_t> subset, std::size_t n) {
  if (subset.empty()) throw InvalidArgument("probe subset must be nonempty");
  for (std::size_t j = 0; j < subset.size(); ++j) {
    if (subset[j] >= n) {
      throw InvalidArgument("subset index " + std::to_string(subset[j] + 1) +
                            " outside 1.." + std::to_string(n));
    }
    if (j > 0 && subset[j] <= subset[j - 1]) {
      throw InvalidArgument("subset indices must be sorted and distinct");
    }
  }
}

void CheckMaps(const TensorNetworkModel& model, const FeatureMaps& maps) {
  if (maps.size() != model.n()) {
    throw InvalidArgument("model has " + std::to_string(model.n()) +
                          " features, feature maps cover " +
                          std::to_string(maps.size()));
  }
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (maps[i].dim() != model.phys_dims()[i]) {
      throw DimensionMismatch(i, model.phys_dims()[i], maps[i].dim());
    }
  }
}

// Reusable buffers for evaluating probes on one lifted instance.
class Prober {
 public:
  Prober(const TensorNetworkModel& model, const LiftedInstance& lifted)
      : model_(model), lifted_(lifted), config_(lifted) {}

  double Probe(std::span<const std::size_t> subset, double t, ProbeMode mode,
               std::uint64_t* forwards) {
    const std::size_t n = lifted_.size();
    CheckSubset(subset, n);
    std::size_t next = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (next < subset.size() && subset[next] == r) {
        ++next;
        continue;
      }
      std::copy(lifted_[r].begin(), lifted_[r].end(), config_[r].begin());
      ApplySelector(t, config_[r]);
    }
    const std::size_t k = subset.size();
    if (ResolveMode(mode, k) == ProbeMode::kSignedToggle) {
      for (std::size_t i : subset) {
        std::copy(lifted_[i].begin(), lifted_[i].end(), config_[i].begin());
        config_[i].back() = 0.0;
      }
      if (forwards != nullptr) *forwards += 1;
      return model_.Forward(config_);
    }
    if (k >= 63) throw InvalidArgument("inclusion-exclusion order too large");
    double total = 0.0;
    const std::uint64_t patterns = std::uint64_t{1} << k;
    for (std::uint64_t b = 0; b < patterns; ++b) {
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t i = subset[j];
        std::copy(lifted_[i].begin(), lifted_[i].end(), config_[i].begin());
        if (((b >> j) & 1U) == 0) ApplySelector(0.0, config_[i]);
      }
      const int off = static_cast<int>(k) - std::popcount(b);
      const double sign = (off % 2 == 0) ? 1.0 : -1.0;
      total += sign * model_.Forward(config_);
    }
    if (forwards != nullptr) *forwards += patterns;
    return total;
  }

 private:
  const TensorNetworkModel& model_;
  const LiftedInstance& lifted_;
  LiftedInstance config_;
};

}  // namespace

ProbeMode ResolveMode(ProbeMode mode, std::size_t k) {
  if (mode != ProbeMode::kAuto) return mode;
  return k >= 2 ? ProbeMode::kSignedToggle : ProbeMode::kInclusionExclusion;
}

std::string ModeName(ProbeMode mode) {
  switch (mode) {
    case ProbeMode::kAuto:
      return "auto";
    case ProbeMode::kInclusionExclusion:
      return "inclusion-exclusion";
    case ProbeMode::kSignedToggle:
      return "signed-toggle";
  }
  return "";
}

ProbeMode ParseMode(const std::string& text) {
  if (text == "auto") return ProbeMode::kAuto;
  if (text == "ie" || text == "inclusion-exclusion") {
    return ProbeMode::kInclusionExclusion;
  }
  if (text == "st" || text == "signed-toggle") return ProbeMode::kSignedToggle;
  throw InvalidArgument("unknown probe mode '" + text + "'");
}

std::vector<Subset> AllSubsets(std::size_t n, std::size_t k) {
  std::vector<Subset> out;
  if (k == 0 || k > n) return out;
  Subset current(k);
  for (std::size_t j = 0; j < k; ++j) current[j] = j;
  while (true) {
    out.push_back(current);
    std::size_t j = k;
    while (j > 0 && current[j - 1] == n - k + (j - 1)) --j;
    if (j == 0) break;
    ++current[j - 1];
    for (std::size_t l = j; l < k; ++l) current[l] = current[l - 1] + 1;
  }
  return out;
}

std::uint64_t ForwardsPerSubset(std::size_t n, std::size_t k, ProbeMode mode) {
  const std::uint64_t nodes = n - k + 1;
  if (ResolveMode(mode, k) == ProbeMode::kSignedToggle) return nodes;
  return (std::uint64_t{1} << k) * nodes;
}

double ProbeLifted(const TensorNetworkModel& model, const LiftedInstance& lifted,
                   std::span<const std::size_t> subset, double t, ProbeMode mode,
                   std::uint64_t* forwards) {
  Prober prober(model, lifted);
  return prober.Probe(subset, t, mode, forwards);
}

double ProbeValue(const TensorNetworkModel& model, const FeatureMaps& maps,
                  std::span<const double> x, std::span<const std::size_t> subset,
                  double t, ProbeMode mode, std::uint64_t* forwards) {
  CheckMaps(model, maps);
  const LiftedInstance lifted = LiftInstance(maps, x);
  return ProbeLifted(model, lifted, subset, t, mode, forwards);
}

AttributionSet Explain(const TensorNetworkModel& model, const FeatureMaps& maps,
                       std::span<const double> x, std::size_t k, ProbeMode mode,
                       const ProbePlan* plan) {
  if (k < 1 || k > model.n()) {
    throw InvalidArgument("order k = " + std::to_string(k) + " outside [1, " +
                          std::to_string(model.n()) + "]");
  }
  const std::vector<Subset> subsets = AllSubsets(model.n(), k);
  return Explain(model, maps, x, k, subsets, mode, plan);
}

AttributionSet Explain(const TensorNetworkModel& model, const FeatureMaps& maps,
                       std::span<const double> x, std::size_t k,
                       std::span<const Subset> subsets, ProbeMode mode,
                       const ProbePlan* plan) {
  const std::size_t n = model.n();
  if (k < 1 || k > n) {
    throw InvalidArgument("order k = " + std::to_string(k) + " outside [1, " +
                          std::to_string(n) + "]");
  }
  CheckMaps(model, maps);
  for (const Subset& s : subsets) {
    if (s.size() != k) throw InvalidArgument("subset size differs from order k");
    CheckSubset(s, n);
  }
  const std::size_t m = n - k + 1;
  std::optional<ProbePlan> own_plan;
  if (plan == nullptr) {
    own_plan.emplace(ProbePlan::Chebyshev(m));
    plan = &*own_plan;
  } else if (plan->size() != m) {
    throw InvalidArgument("probe plan has " + std::to_string(plan->size()) +
                          " nodes, order " + std::to_string(k) + " needs " +
                          std::to_string(m));
  }
  const std::vector<double> beta = SiiWeights(n, k);
  const LiftedInstance lifted = LiftInstance(maps, x);
  const ProbeMode resolved = ResolveMode(mode, k);

  AttributionSet out;
  out.order = k;
  out.entries.resize(subsets.size());
  std::vector<std::uint64_t> forwards(subsets.size(), 0);
  std::vector<double> residuals(subsets.size(), 0.0);

  ParallelFor(subsets.size(), [&](std::size_t idx) {
    Prober prober(model, lifted);
    const Subset& subset = subsets[idx];
    AttributionEntry& entry = out.entries[idx];
    entry.subset = subset;
    std::vector<double> q(m);
    for (std::size_t l = 0; l < m; ++l) {
      q[l] = prober.Probe(subset, plan->nodes()[l], resolved, &forwards[idx]);
    }
    if (m == 1) {
      // Q_S is constant in t; its single value is c_0.
      entry.value = beta[0] * q[0];
      return;
    }
    const ProbePlan::Solution sol = plan->Solve(q);
    const std::vector<double> marginal = PowerToMarginalSums(sol.coefficients);
    double value = 0.0;
    for (std::size_t s = 0; s < m; ++s) value += beta[s] * marginal[s];
    entry.value = value;
    residuals[idx] = sol.residual;
    double scale = 1.0;
    for (double v : q) scale = std::max(scale, std::abs(v));
    entry.ill_conditioned = sol.residual / scale > kIllConditionedResidual;
  });

  for (std::size_t idx = 0; idx < subsets.size(); ++idx) {
    out.forwards_used += forwards[idx];
    out.max_solve_residual = std::max(out.max_solve_residual, residuals[idx]);
  }
  return out;
}

std::vector<BatchItem> ExplainBatch(const TensorNetworkModel& model,
                                    const FeatureMaps& maps,
                                    std::span<const std::vector<double>> instances,
                                    std::size_t k, ProbeMode mode) {
  if (k < 1 || k > model.n()) {
    throw InvalidArgument("order k = " + std::to_string(k) + " outside [1, " +
                          std::to_string(model.n()) + "]");
  }
  const ProbePlan plan = ProbePlan::Chebyshev(model.n() - k + 1);
  const std::vector<Subset> subsets = AllSubsets(model.n(), k);
  std::vector<BatchItem> items(instances.size());
  ParallelFor(instances.size(), [&](std::size_t i) {
    try {
      items[i].result = Explain(model, maps, instances[i], k, subsets, mode, &plan);
    } catch (const std::exception& e) {
      items[i].error = e.what();
    }
  });
  return items;
}

}  // namespace tnshap
