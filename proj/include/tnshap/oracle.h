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

#ifndef TNSHAP_ORACLE_H_
#define TNSHAP_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tnshap/attribute.h"
#include "tnshap/interpolation.h"
#include "tnshap/lift.h"
#include "tnshap/tensor_network.h"

namespace tnshap {

// v(C) for every coalition C, indexed by bitmask: bit i set <=> feature i+1
// is on. Entry 0 is v(empty) = g(all off).
struct CoalitionTable {
  std::size_t n = 0;
  std::vector<double> values;

  double operator[](std::uint64_t mask) const { return values[mask]; }
};

inline constexpr std::size_t kMaxOracleFeatures = 20;

// Builds the interventional game of the surrogate at x: features in C use
// S(1) x~_j, the rest S(0) x~_j. Performs exactly 2^n forwards.
CoalitionTable EnumerateGame(const TensorNetworkModel& model,
                             const FeatureMaps& maps, std::span<const double> x,
                             std::size_t max_n = kMaxOracleFeatures);

// Direct summation of the Shapley formula over all coalitions.
std::vector<double> ExactShapley(const CoalitionTable& table);

// Shapley interaction index of order k for every size-k subset, by direct
// summation of weighted discrete derivatives. forwards_used is 0.
AttributionSet ExactSii(const CoalitionTable& table, std::size_t k);

// c_T = sum_{L subset T} (-1)^{|T|-|L|} v(L), via the fast subset transform.
std::vector<double> MobiusCoefficients(const CoalitionTable& table);

// Inverse of MobiusCoefficients: v(C) = sum_{T subset C} c_T.
std::vector<double> ZetaTransform(std::span<const double> coefficients);

// Groups Mobius coefficients by |T|: entry s is sum_{|T|=s} c_T.
std::vector<double> SizeAggregates(std::span<const double> mobius, std::size_t n);

struct DiagonalProbeResult {
  std::vector<double> size_sums;  // coefficients of p(t), s = 0..n
  double residual = 0.0;
  bool ill_conditioned = false;
};

// Interpolates p(t) = g(S(t) x~_1, ..., S(t) x~_n) on the plan's nodes. The
// plan must have n+1 nodes.
DiagonalProbeResult DiagonalCoefficientProbe(const TensorNetworkModel& model,
                                             const FeatureMaps& maps,
                                             std::span<const double> x,
                                             const ProbePlan& plan);

// Binary dump: 8-byte magic "TNSHAPCT", n as little-endian uint64, then 2^n
// little-endian IEEE-754 doubles.
void WriteTableDump(std::ostream& out, const CoalitionTable& table);
CoalitionTable ReadTableDump(std::istream& in);
void WriteTableDump(const std::string& path, const CoalitionTable& table);
CoalitionTable ReadTableDump(const std::string& path);

}  // namespace tnshap

#endif  // TNSHAP_ORACLE_H_
