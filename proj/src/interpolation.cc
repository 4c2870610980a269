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

#include "tnshap/interpolation.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "tnshap/errors.h"
#include "tnshap/log.h"

namespace tnshap {

std::vector<double> ChebyshevNodes(std::size_t m) {
  if (m == 0) throw InvalidArgument("node count must be >= 1");
  std::vector<double> nodes(m);
  for (std::size_t l = 0; l < m; ++l) {
    const double angle = (2.0 * static_cast<double>(l) + 1.0) * std::numbers::pi /
                         (2.0 * static_cast<double>(m));
    nodes[l] = 0.5 * (1.0 + std::cos(angle));
  }
  return nodes;
}

struct ProbePlan::Factorization {
  Eigen::MatrixXd vandermonde;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr;
  double condition = 0.0;
};

ProbePlan::ProbePlan(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw InvalidArgument("probe plan needs at least one node");
  std::vector<double> sorted = nodes_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t l = 1; l < sorted.size(); ++l) {
    if (sorted[l] - sorted[l - 1] <= 1e-12) {
      throw InvalidArgument("probe nodes must be pairwise distinct");
    }
  }
  const auto m = static_cast<Eigen::Index>(nodes_.size());
  auto f = std::make_shared<Factorization>();
  f->vandermonde.resize(m, m);
  for (Eigen::Index l = 0; l < m; ++l) {
    double power = 1.0;
    for (Eigen::Index s = 0; s < m; ++s) {
      f->vandermonde(l, s) = power;
      power *= nodes_[static_cast<std::size_t>(l)];
    }
  }
  f->qr.compute(f->vandermonde);
  const Eigen::VectorXd sv =
      Eigen::JacobiSVD<Eigen::MatrixXd>(f->vandermonde).singularValues();
  f->condition = sv(m - 1) > 0.0 ? sv(0) / sv(m - 1)
                                 : std::numeric_limits<double>::infinity();
  if (nodes_.size() > kConditioningWarnNodes) {
    TNSHAP_LOG(kError) << "interpolation with " << nodes_.size()
                       << " nodes: monomial Vandermonde condition estimate "
                       << f->condition << ", accuracy may degrade";
  }
  factorization_ = std::move(f);
}

double ProbePlan::condition_estimate() const { return factorization_->condition; }

ProbePlan::Solution ProbePlan::Solve(std::span<const double> values) const {
  if (values.size() != nodes_.size()) {
    throw InvalidArgument("solve expects one value per node");
  }
  const auto m = static_cast<Eigen::Index>(nodes_.size());
  const Eigen::Map<const Eigen::VectorXd> q(values.data(), m);
  const Factorization& f = *factorization_;
  Eigen::VectorXd c = f.qr.solve(q);
  Eigen::VectorXd r = q - f.vandermonde * c;
  c += f.qr.solve(r);
  r = q - f.vandermonde * c;
  Solution out;
  out.coefficients.assign(c.data(), c.data() + m);
  out.residual = r.cwiseAbs().maxCoeff();
  return out;
}

}  // namespace tnshap
