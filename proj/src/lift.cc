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

#include "tnshap/lift.h"

#include <cmath>
#include <sstream>

#include "tnshap/errors.h"

namespace tnshap {

LiftSpec LiftSpec::Polynomial(int degree) {
  if (degree < 1) throw InvalidArgument("polynomial lift degree must be >= 1");
  return {Kind::kPolynomial, degree, std::numbers::pi};
}

LiftSpec LiftSpec::Fourier(int harmonics, double omega) {
  if (harmonics < 1) throw InvalidArgument("fourier lift needs >= 1 harmonic");
  if (!std::isfinite(omega)) throw InvalidArgument("fourier omega must be finite");
  return {Kind::kFourier, harmonics, omega};
}

std::size_t LiftSpec::dim() const {
  switch (kind) {
    case Kind::kBinary:
      return 2;
    case Kind::kPolynomial:
      return static_cast<std::size_t>(degree) + 1;
    case Kind::kFourier:
      return 2 * static_cast<std::size_t>(degree) + 1;
  }
  return 0;
}

std::string LiftSpec::name() const {
  switch (kind) {
    case Kind::kBinary:
      return "binary";
    case Kind::kPolynomial:
      return "poly";
    case Kind::kFourier:
      return "fourier";
  }
  return "";
}

FeatureMaps BinaryMaps(std::size_t n) { return FeatureMaps(n, LiftSpec::Binary()); }

std::vector<std::size_t> PhysDims(const FeatureMaps& maps) {
  std::vector<std::size_t> dims;
  dims.reserve(maps.size());
  for (const LiftSpec& m : maps) dims.push_back(m.dim());
  return dims;
}

std::vector<double> Lift(const LiftSpec& spec, double x) {
  std::vector<double> out;
  out.reserve(spec.dim());
  switch (spec.kind) {
    case LiftSpec::Kind::kBinary:
      out.push_back(x);
      break;
    case LiftSpec::Kind::kPolynomial: {
      double power = 1.0;
      for (int j = 0; j < spec.degree; ++j) {
        power *= x;
        out.push_back(power);
      }
      break;
    }
    case LiftSpec::Kind::kFourier:
      for (int j = 1; j <= spec.degree; ++j) {
        out.push_back(std::sin(j * spec.omega * x));
        out.push_back(std::cos(j * spec.omega * x));
      }
      break;
  }
  out.push_back(1.0);
  return out;
}

LiftedInstance LiftInstance(const FeatureMaps& maps, std::span<const double> x) {
  if (maps.size() != x.size()) {
    throw InvalidArgument("instance has " + std::to_string(x.size()) +
                          " features, feature maps cover " +
                          std::to_string(maps.size()));
  }
  LiftedInstance lifted;
  lifted.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) lifted.push_back(Lift(maps[i], x[i]));
  return lifted;
}

std::vector<double> SelectorApply(double t, std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  ApplySelector(t, out);
  return out;
}

std::vector<double> SignedToggle(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  if (!out.empty()) out.back() = 0.0;
  return out;
}

LiftSpec ParseLiftSpec(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  auto integer = [&](std::size_t i) {
    if (parts.size() <= i) throw InvalidArgument("lift \"" + text + "\" needs a degree");
    return std::stoi(parts[i]);
  };
  if (parts.empty()) throw InvalidArgument("empty lift");
  if (parts[0] == "binary" && parts.size() == 1) return LiftSpec::Binary();
  if (parts[0] == "poly" && parts.size() == 2) return LiftSpec::Polynomial(integer(1));
  if (parts[0] == "fourier" && (parts.size() == 2 || parts.size() == 3)) {
    return parts.size() == 3 ? LiftSpec::Fourier(integer(1), std::stod(parts[2]))
                             : LiftSpec::Fourier(integer(1));
  }
  throw InvalidArgument("unknown lift \"" + text +
                        "\" (binary, poly:K, fourier:K[:OMEGA])");
}

}  // namespace tnshap
