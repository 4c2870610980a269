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

#ifndef TNSHAP_LIFT_H_
#define TNSHAP_LIFT_H_

#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace tnshap {

// Per-feature map x -> [phi(x), 1]. The trailing bias channel is always 1.
//
//   Binary          [x, 1]                                        d = 2
//   Polynomial(k)   [x, x^2, ..., x^k, 1]                         d = k + 1
//   Fourier(k, w)   [sin(wx), cos(wx), ..., sin(kwx), cos(kwx), 1] d = 2k + 1
//
// The "off" state of a feature is [0, ..., 0, 1]. Binary and polynomial maps
// send 0 to the off state; Fourier maps do not (cos(0) = 1), so attributions
// under a Fourier lift are relative to a synthetic baseline rather than x = 0.
struct LiftSpec {
  enum class Kind { kBinary, kPolynomial, kFourier };

  Kind kind = Kind::kBinary;
  int degree = 1;
  double omega = std::numbers::pi;

  static LiftSpec Binary() { return {}; }
  static LiftSpec Polynomial(int degree);
  static LiftSpec Fourier(int harmonics, double omega = std::numbers::pi);

  std::size_t dim() const;
  // True when lift(0) equals the off state.
  bool zero_is_off() const { return kind != Kind::kFourier; }
  std::string name() const;

  bool operator==(const LiftSpec&) const = default;
};

using FeatureMaps = std::vector<LiftSpec>;
using LiftedInstance = std::vector<std::vector<double>>;

FeatureMaps BinaryMaps(std::size_t n);

// Parses "binary", "poly:K" or "fourier:K[:OMEGA]".
LiftSpec ParseLiftSpec(const std::string& text);
std::vector<std::size_t> PhysDims(const FeatureMaps& maps);

std::vector<double> Lift(const LiftSpec& spec, double x);
LiftedInstance LiftInstance(const FeatureMaps& maps, std::span<const double> x);

// Diag(t I, 1) applied in place: data channels scaled by t, bias untouched.
inline void ApplySelector(double t, std::span<double> v) {
  for (std::size_t c = 0; c + 1 < v.size(); ++c) v[c] *= t;
}

std::vector<double> SelectorApply(double t, std::span<const double> v);

// (S(1) - S(0)) v = [phi, 0].
std::vector<double> SignedToggle(std::span<const double> v);

}  // namespace tnshap

#endif  // TNSHAP_LIFT_H_
