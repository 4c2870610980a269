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

#include "tnshap/oracle.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "tnshap/errors.h"
#include "tnshap/parallel.h"
#include "tnshap/weights.h"

namespace tnshap {
namespace {

constexpr std::array<char, 8> kTableMagic = {'T', 'N', 'S', 'H', 'A', 'P', 'C', 'T'};

void CheckTable(const CoalitionTable& table) {
  if (table.n > kMaxOracleFeatures + 10 ||
      table.values.size() != (std::size_t{1} << table.n)) {
    throw InvalidArgument("coalition table length must be 2^n");
  }
}

void PutU64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((v >> (8 * b)) & 0xFF);
  out.write(bytes.data(), 8);
}

std::uint64_t GetU64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), 8);
  if (!in) throw ParseError("table dump", 0, "truncated file");
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  return v;
}

}  // namespace

CoalitionTable EnumerateGame(const TensorNetworkModel& model,
                             const FeatureMaps& maps, std::span<const double> x,
                             std::size_t max_n) {
  const std::size_t n = model.n();
  if (n > max_n) {
    throw SizeLimitExceeded("coalition enumeration for n = " + std::to_string(n),
                            1ULL << std::min<std::size_t>(n, 63),
                            1ULL << std::min<std::size_t>(max_n, 63));
  }
  if (maps.size() != n) throw InvalidArgument("feature maps do not cover the model");
  const LiftedInstance on = LiftInstance(maps, x);
  LiftedInstance off = on;
  for (auto& v : off) ApplySelector(0.0, v);

  CoalitionTable table;
  table.n = n;
  table.values.assign(std::size_t{1} << n, 0.0);
  constexpr std::size_t kChunk = 256;
  const std::size_t total = table.values.size();
  const std::size_t chunks = (total + kChunk - 1) / kChunk;
  ParallelFor(chunks, [&](std::size_t chunk) {
    LiftedInstance config = off;
    const std::size_t begin = chunk * kChunk;
    const std::size_t end = std::min(total, begin + kChunk);
    for (std::size_t mask = begin; mask < end; ++mask) {
      for (std::size_t i = 0; i < n; ++i) {
        config[i] = ((mask >> i) & 1U) ? on[i] : off[i];
      }
      table.values[mask] = model.Forward(config);
    }
  });
  return table;
}

std::vector<double> ExactShapley(const CoalitionTable& table) {
  CheckTable(table);
  const std::size_t n = table.n;
  if (n == 0) return {};
  const std::vector<double> alpha = ShapleyWeights(n);
  std::vector<double> phi(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    double acc = 0.0;
    for (std::uint64_t mask = 0; mask < table.values.size(); ++mask) {
      if (mask & bit) continue;
      acc += alpha[std::popcount(mask)] * (table[mask | bit] - table[mask]);
    }
    phi[i] = acc;
  }
  return phi;
}

AttributionSet ExactSii(const CoalitionTable& table, std::size_t k) {
  CheckTable(table);
  const std::size_t n = table.n;
  const std::vector<double> beta = SiiWeights(n, k);
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  AttributionSet out;
  out.order = k;
  for (const Subset& subset : AllSubsets(n, k)) {
    std::uint64_t s_mask = 0;
    for (std::size_t i : subset) s_mask |= std::uint64_t{1} << i;
    const std::uint64_t rest = full & ~s_mask;
    double acc = 0.0;
    // Enumerate C over all submasks of the complement (including empty).
    for (std::uint64_t c = rest;; c = (c - 1) & rest) {
      double delta = 0.0;
      for (std::uint64_t l = s_mask;; l = (l - 1) & s_mask) {
        const int off = static_cast<int>(k) - std::popcount(l);
        delta += (off % 2 == 0 ? 1.0 : -1.0) * table[c | l];
        if (l == 0) break;
      }
      acc += beta[std::popcount(c)] * delta;
      if (c == 0) break;
    }
    out.entries.push_back({subset, acc, false});
  }
  return out;
}

std::vector<double> MobiusCoefficients(const CoalitionTable& table) {
  CheckTable(table);
  std::vector<double> c = table.values;
  for (std::size_t bit = 1; bit < c.size(); bit <<= 1) {
    for (std::size_t mask = 0; mask < c.size(); ++mask) {
      if (mask & bit) c[mask] -= c[mask ^ bit];
    }
  }
  return c;
}

std::vector<double> ZetaTransform(std::span<const double> coefficients) {
  if (!std::has_single_bit(coefficients.size())) {
    throw InvalidArgument("zeta transform length must be a power of two");
  }
  std::vector<double> v(coefficients.begin(), coefficients.end());
  for (std::size_t bit = 1; bit < v.size(); bit <<= 1) {
    for (std::size_t mask = 0; mask < v.size(); ++mask) {
      if (mask & bit) v[mask] += v[mask ^ bit];
    }
  }
  return v;
}

std::vector<double> SizeAggregates(std::span<const double> mobius, std::size_t n) {
  if (mobius.size() != (std::size_t{1} << n)) {
    throw InvalidArgument("mobius vector length must be 2^n");
  }
  std::vector<double> sums(n + 1, 0.0);
  for (std::size_t mask = 0; mask < mobius.size(); ++mask) {
    sums[std::popcount(mask)] += mobius[mask];
  }
  return sums;
}

DiagonalProbeResult DiagonalCoefficientProbe(const TensorNetworkModel& model,
                                             const FeatureMaps& maps,
                                             std::span<const double> x,
                                             const ProbePlan& plan) {
  const std::size_t n = model.n();
  if (plan.size() != n + 1) {
    throw InvalidArgument("diagonal probe needs n+1 = " + std::to_string(n + 1) +
                          " nodes, plan has " + std::to_string(plan.size()));
  }
  const LiftedInstance lifted = LiftInstance(maps, x);
  std::vector<double> values(plan.size());
  LiftedInstance config = lifted;
  for (std::size_t l = 0; l < plan.size(); ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      config[i] = lifted[i];
      ApplySelector(plan.nodes()[l], config[i]);
    }
    values[l] = model.Forward(config);
  }
  const ProbePlan::Solution sol = plan.Solve(values);
  double scale = 1.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  return {sol.coefficients, sol.residual,
          sol.residual / scale > kIllConditionedResidual};
}

void WriteTableDump(std::ostream& out, const CoalitionTable& table) {
  CheckTable(table);
  out.write(kTableMagic.data(), kTableMagic.size());
  PutU64(out, table.n);
  for (double v : table.values) PutU64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw Error("failed writing coalition table dump");
}

CoalitionTable ReadTableDump(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kTableMagic) throw ParseError("table dump", 0, "bad magic");
  const std::uint64_t n = GetU64(in);
  if (n > 40) throw ParseError("table dump", 0, "implausible n");
  CoalitionTable table;
  table.n = static_cast<std::size_t>(n);
  table.values.resize(std::size_t{1} << n);
  for (double& v : table.values) v = std::bit_cast<double>(GetU64(in));
  return table;
}

void WriteTableDump(const std::string& path, const CoalitionTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  WriteTableDump(out, table);
}

CoalitionTable ReadTableDump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return ReadTableDump(in);
}

}  // namespace tnshap
