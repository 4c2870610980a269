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

#include "tnshap/fit.h"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "tnshap/attribute.h"
#include "tnshap/errors.h"
#include "tnshap/interpolation.h"
#include "tnshap/log.h"
#include "tnshap/oracle.h"
#include "tnshap/parallel.h"

namespace tnshap {
namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

constexpr double kTikhonovScale = 1e-10;
// Parameter stream for student initialization, apart from sampling.
constexpr std::uint64_t kInitStream = 0x9E3779B97F4A7C15ULL;

std::vector<double> GaussianNeighbor(std::span<const double> x0, double scale,
                                     std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(x0.begin(), x0.end());
  for (double& v : x) v += scale * normal(rng);
  return x;
}

void CheckCenter(const FeatureMaps& maps, std::span<const double> x0) {
  if (maps.empty()) throw InvalidArgument("training set needs n >= 1");
  if (x0.size() != maps.size()) {
    throw DimensionMismatch(x0.size() < maps.size() ? x0.size() : maps.size(),
                            maps.size(), x0.size());
  }
}

// Weighted least squares by column-pivoted QR. Rank-deficient systems are
// regularized with a ridge term through the augmented system [A; sqrt(l) I].
Vector SolveLeastSquares(const Matrix& a, const Vector& b,
                         std::size_t* fallbacks) {
  const Eigen::Index p = a.cols();
  if (a.rows() >= p) {
    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    if (qr.rank() == p) return qr.solve(b);
  }
  ++*fallbacks;
  const double scale = a.squaredNorm() / static_cast<double>(p);
  const double lambda = kTikhonovScale * (scale > 0.0 ? scale : 1.0);
  Matrix augmented = Matrix::Zero(a.rows() + p, p);
  augmented.topRows(a.rows()) = a;
  augmented.bottomRows(p).diagonal().setConstant(std::sqrt(lambda));
  Vector rhs = Vector::Zero(a.rows() + p);
  rhs.head(a.rows()) = b;
  return Eigen::HouseholderQR<Matrix>(augmented).solve(rhs);
}

// Strides of a row-major tensor.
std::vector<std::size_t> Strides(const DenseTensor& t) {
  std::vector<std::size_t> strides(t.rank(), 1);
  for (std::size_t a = t.rank(); a-- > 1;) strides[a - 1] = strides[a] * t.extent(a);
  return strides;
}

// Views t as a matrix whose columns run over `axis` and rows over the
// remaining axes in order.
Matrix Unfold(const DenseTensor& t, std::size_t axis) {
  const std::size_t cols = t.extent(axis);
  Matrix m(t.size() / cols, cols);
  const auto strides = Strides(t);
  std::vector<std::size_t> idx(t.rank(), 0);
  for (std::size_t f = 0; f < t.size(); ++f) {
    std::size_t row = 0;
    for (std::size_t a = 0; a < t.rank(); ++a) {
      if (a != axis) row = row * t.extent(a) + idx[a];
    }
    m(row, idx[axis]) = t[f];
    for (std::size_t a = t.rank(); a-- > 0;) {
      if (++idx[a] < t.extent(a)) break;
      idx[a] = 0;
    }
  }
  return m;
}

void Fold(const Matrix& m, std::size_t axis, DenseTensor& t) {
  std::vector<std::size_t> idx(t.rank(), 0);
  for (std::size_t f = 0; f < t.size(); ++f) {
    std::size_t row = 0;
    for (std::size_t a = 0; a < t.rank(); ++a) {
      if (a != axis) row = row * t.extent(a) + idx[a];
    }
    t[f] = m(row, idx[axis]);
    for (std::size_t a = t.rank(); a-- > 0;) {
      if (++idx[a] < t.extent(a)) break;
      idx[a] = 0;
    }
  }
}

// Sweep state for ALS over a generic tree-shaped network.
class AlsSolver {
 public:
  AlsSolver(const TrainingSet& data, TnTopology topology,
            std::vector<DenseTensor> cores)
      : data_(data),
        topology_(std::move(topology)),
        graph_(BuildGraph(topology_)),
        cores_(std::move(cores)),
        rows_(data.rows.size()) {
    const std::size_t nodes = cores_.size();
    neighbors_.resize(nodes);
    for (std::size_t e = 0; e < graph_.edges.size(); ++e) {
      const auto [a, b] = graph_.edges[e];
      neighbors_[a].push_back({b, e});
      neighbors_[b].push_back({a, e});
      bond_.push_back(0);
    }
    for (std::size_t c = 0; c < nodes; ++c) {
      for (std::size_t a = 0; a < graph_.axes[c].size(); ++a) {
        if (graph_.axes[c][a].kind == CoreAxis::Kind::kBond) {
          bond_[graph_.axes[c][a].index] = cores_[c].extent(a);
        }
      }
    }
    messages_.resize(2 * graph_.edges.size());
    for (std::size_t e = 0; e < graph_.edges.size(); ++e) {
      messages_[2 * e].assign(rows_ * bond_[e], 0.0);
      messages_[2 * e + 1].assign(rows_ * bond_[e], 0.0);
    }
    total_weight_ = 0.0;
    double mean = 0.0;
    for (const TrainingRow& row : data_.rows) {
      total_weight_ += row.weight;
      mean += row.weight * row.target;
    }
    mean /= total_weight_;
    total_ss_ = 0.0;
    for (const TrainingRow& row : data_.rows) {
      total_ss_ += row.weight * (row.target - mean) * (row.target - mean);
      total_sq_ += row.weight * row.target * row.target;
    }
    // Messages toward the root (node 0), children before parents.
    for (std::size_t c = nodes; c-- > 1;) UpdateMessage(c, Parent(c));
  }

  AlsSolver(const AlsSolver&) = delete;
  AlsSolver& operator=(const AlsSolver&) = delete;

  // One Euler-tour sweep from the root; every visit solves the visited core.
  // Returns the weighted MSE after the final update.
  double Sweep() {
    return Visit(0, kNone);
  }

  double RSquared(double mse) const {
    const double ss = mse * total_weight_;
    if (total_ss_ <= 0.0) return 1.0;
    return 1.0 - ss / total_ss_;
  }

  // Like RSquared, but falls back to the raw second moment for constant
  // targets so that stopping still tracks the residual.
  double Progress(double mse) const {
    if (total_ss_ > 0.0) return RSquared(mse);
    if (total_sq_ <= 0.0) return 1.0;
    return 1.0 - mse * total_weight_ / total_sq_;
  }

  std::size_t fallbacks() const { return fallbacks_; }
  std::vector<DenseTensor> TakeCores() { return std::move(cores_); }

 private:
  struct Neighbor {
    std::size_t node;
    std::size_t edge;
  };

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t Parent(std::size_t c) const {
    for (const Neighbor& nb : neighbors_[c]) {
      if (nb.node < c) return nb.node;
    }
    return kNone;
  }

  // Index of the directed message travelling into `to` along edge e.
  std::size_t MessageInto(std::size_t to, std::size_t e) const {
    return graph_.edges[e].second == to ? 2 * e : 2 * e + 1;
  }

  // Input vector for axis a of core c on training row r.
  const double* AxisInput(std::size_t c, std::size_t a, std::size_t r) const {
    static const double kOne = 1.0;
    const CoreAxis& axis = graph_.axes[c][a];
    switch (axis.kind) {
      case CoreAxis::Kind::kPhysical:
        return data_.rows[r].lifted[axis.index].data();
      case CoreAxis::Kind::kDummy:
        return &kOne;
      case CoreAxis::Kind::kBond:
        return messages_[MessageInto(c, axis.index)].data() +
               r * bond_[axis.index];
    }
    return &kOne;
  }

  std::size_t AxisOf(std::size_t c, std::size_t edge) const {
    for (std::size_t a = 0; a < graph_.axes[c].size(); ++a) {
      const CoreAxis& axis = graph_.axes[c][a];
      if (axis.kind == CoreAxis::Kind::kBond && axis.index == edge) return a;
    }
    throw InvalidArgument("edge not incident to core");
  }

  // Recomputes the message from `from` to `to` for every row.
  void UpdateMessage(std::size_t from, std::size_t to) {
    std::size_t edge = 0;
    for (const Neighbor& nb : neighbors_[from]) {
      if (nb.node == to) edge = nb.edge;
    }
    const std::size_t open = AxisOf(from, edge);
    const DenseTensor& core = cores_[from];
    const std::size_t rank = core.rank();
    const std::size_t width = bond_[edge];
    std::vector<double>& out = messages_[MessageInto(to, edge)];
    ParallelFor(rows_, [&](std::size_t r) {
      std::vector<const double*> in(rank);
      for (std::size_t a = 0; a < rank; ++a) {
        in[a] = a == open ? nullptr : AxisInput(from, a, r);
      }
      double* dst = out.data() + r * width;
      std::fill(dst, dst + width, 0.0);
      std::vector<std::size_t> idx(rank, 0);
      for (std::size_t f = 0; f < core.size(); ++f) {
        double prod = core[f];
        for (std::size_t a = 0; a < rank; ++a) {
          if (a != open) prod *= in[a][idx[a]];
        }
        dst[idx[open]] += prod;
        for (std::size_t a = rank; a-- > 0;) {
          if (++idx[a] < core.extent(a)) break;
          idx[a] = 0;
        }
      }
    });
  }

  // Solves core c against its environment; returns the resulting MSE.
  double UpdateCore(std::size_t c) {
    DenseTensor& core = cores_[c];
    const std::size_t rank = core.rank();
    const std::size_t p = core.size();
    Matrix design(rows_, p);
    ParallelFor(rows_, [&](std::size_t r) {
      std::vector<const double*> in(rank);
      for (std::size_t a = 0; a < rank; ++a) in[a] = AxisInput(c, a, r);
      std::vector<std::size_t> idx(rank, 0);
      for (std::size_t f = 0; f < p; ++f) {
        double prod = 1.0;
        for (std::size_t a = 0; a < rank; ++a) prod *= in[a][idx[a]];
        design(r, f) = prod;
        for (std::size_t a = rank; a-- > 0;) {
          if (++idx[a] < core.extent(a)) break;
          idx[a] = 0;
        }
      }
    });
    Vector sqrt_w(rows_);
    Vector y(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      sqrt_w[r] = std::sqrt(data_.rows[r].weight);
      y[r] = data_.rows[r].target;
    }
    const Matrix a = sqrt_w.asDiagonal() * design;
    const Vector b = sqrt_w.cwiseProduct(y);
    const Vector theta = SolveLeastSquares(a, b, &fallbacks_);
    const Vector old = Eigen::Map<const Vector>(core.data().data(), p);
    const double before = (a * old - b).squaredNorm();
    const double after = (a * theta - b).squaredNorm();
    // A regularized solve may land slightly above the current point; the
    // sweep keeps whichever is better so the objective never increases.
    if (after <= before) {
      for (std::size_t f = 0; f < p; ++f) core[f] = theta[f];
      return after / total_weight_;
    }
    return before / total_weight_;
  }

  // Moves the gauge from core `from` onto `to` across their shared edge:
  // `from` becomes an isometry from the edge into its other legs.
  void ShiftGauge(std::size_t from, std::size_t to, std::size_t edge) {
    DenseTensor& src = cores_[from];
    const std::size_t axis = AxisOf(from, edge);
    const Matrix m = Unfold(src, axis);
    if (m.rows() < m.cols()) return;
    Eigen::HouseholderQR<Matrix> qr(m);
    const Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
    const Matrix r = q.transpose() * m;
    Fold(q, axis, src);
    DenseTensor& dst = cores_[to];
    const std::size_t dst_axis = AxisOf(to, edge);
    // dst'[.., j, ..] = sum_k r(j, k) dst[.., k, ..]
    const Matrix dm = Unfold(dst, dst_axis);
    Fold(dm * r.transpose(), dst_axis, dst);
  }

  double Visit(std::size_t c, std::size_t parent) {
    double mse = UpdateCore(c);
    for (const Neighbor& nb : neighbors_[c]) {
      if (nb.node == parent) continue;
      ShiftGauge(c, nb.node, nb.edge);
      UpdateMessage(c, nb.node);
      Visit(nb.node, c);
      ShiftGauge(nb.node, c, nb.edge);
      UpdateMessage(nb.node, c);
      mse = UpdateCore(c);
    }
    return mse;
  }

  const TrainingSet& data_;
  TnTopology topology_;
  TnGraph graph_;
  std::vector<DenseTensor> cores_;
  std::size_t rows_;
  std::vector<std::vector<Neighbor>> neighbors_;
  std::vector<std::size_t> bond_;
  std::vector<std::vector<double>> messages_;  // [2e] toward edges[e].second
  double total_weight_ = 0.0;
  double total_ss_ = 0.0;
  double total_sq_ = 0.0;
  std::size_t fallbacks_ = 0;
};

std::vector<DenseTensor> InitialCores(const TnTopology& topology,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ kInitStream);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<DenseTensor> cores;
  const auto shapes = topology.CoreShapes();
  for (const auto& shape : shapes) {
    DenseTensor core(shape);
    const double scale = 1.0 / std::sqrt(static_cast<double>(core.size()));
    for (double& v : core.data()) v = scale * normal(rng);
    cores.push_back(std::move(core));
  }
  return cores;
}

}  // namespace

void FitConfig::Validate() const {
  if (bond_dim < 1) throw InvalidArgument("bond_dim must be >= 1");
  if (neighborhood_samples < 1) {
    throw InvalidArgument("neighborhood_samples must be >= 1");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("sigma must be > 0");
  }
  if (!(feature_std > 0.0) || !std::isfinite(feature_std)) {
    throw InvalidArgument("feature_std must be > 0");
  }
  if (!(structured_weight > 0.0) || !(neighborhood_weight > 0.0)) {
    throw InvalidArgument("row weights must be > 0");
  }
  if (max_sweeps < 1) throw InvalidArgument("max_sweeps must be >= 1");
  if (!(tolerance >= 0.0)) throw InvalidArgument("tolerance must be >= 0");
}

TrainingSet BuildTrainingSet(const LiftedFunction& teacher,
                             const FeatureMaps& maps,
                             std::span<const double> x0,
                             const FitConfig& config) {
  config.Validate();
  CheckCenter(maps, x0);
  const std::size_t n = maps.size();
  std::mt19937_64 rng(config.seed);
  TrainingSet set;
  for (std::size_t s = 0; s < config.neighborhood_samples; ++s) {
    TrainingRow row;
    row.lifted = LiftInstance(
        maps, GaussianNeighbor(x0, config.sigma * config.feature_std, rng));
    row.weight = config.neighborhood_weight;
    set.rows.push_back(std::move(row));
  }
  if (config.structured_probes) {
    const LiftedInstance base = LiftInstance(maps, x0);
    const std::vector<double> nodes = ChebyshevNodes(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (double t : nodes) {
        for (bool on : {true, false}) {
          TrainingRow row;
          row.lifted = base;
          for (std::size_t j = 0; j < n; ++j) {
            if (j != i) ApplySelector(t, row.lifted[j]);
          }
          if (!on) ApplySelector(0.0, row.lifted[i]);
          row.weight = config.structured_weight;
          row.structured = true;
          set.rows.push_back(std::move(row));
        }
      }
    }
  }
  ParallelFor(set.rows.size(), [&](std::size_t r) {
    set.rows[r].target = teacher(set.rows[r].lifted);
  });
  set.teacher_evaluations = set.rows.size();
  return set;
}

TrainingSet BuildTrainingSet(const PointFunction& teacher,
                             const FeatureMaps& maps,
                             std::span<const double> x0,
                             const FitConfig& config) {
  config.Validate();
  CheckCenter(maps, x0);
  const std::size_t n = maps.size();
  std::mt19937_64 rng(config.seed);
  std::vector<std::vector<double>> points;
  std::vector<bool> structured;
  for (std::size_t s = 0; s < config.neighborhood_samples; ++s) {
    points.push_back(GaussianNeighbor(x0, config.sigma * config.feature_std, rng));
    structured.push_back(false);
  }
  if (config.structured_probes) {
    const std::vector<double> nodes = ChebyshevNodes(n);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (double t : nodes) {
        std::vector<double> x(x0.begin(), x0.end());
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i && uniform(rng) >= t) x[j] = 0.0;
        }
        points.push_back(x);
        x[i] = 0.0;
        points.push_back(std::move(x));
        structured.push_back(true);
        structured.push_back(true);
      }
    }
  }
  TrainingSet set;
  set.rows.resize(points.size());
  ParallelFor(points.size(), [&](std::size_t r) {
    TrainingRow& row = set.rows[r];
    row.lifted = LiftInstance(maps, points[r]);
    row.target = teacher(points[r]);
    row.structured = structured[r];
    row.weight = structured[r] ? config.structured_weight
                               : config.neighborhood_weight;
  });
  set.teacher_evaluations = set.rows.size();
  return set;
}

std::pair<TensorNetworkModel, FitReport> FitStudent(const TrainingSet& data,
                                                   const FitConfig& config) {
  config.Validate();
  if (data.rows.empty()) throw InvalidArgument("empty training set");
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::size_t> dims;
  for (const auto& v : data.rows[0].lifted) dims.push_back(v.size());
  for (const TrainingRow& row : data.rows) {
    if (row.lifted.size() != dims.size()) {
      throw InvalidArgument("training rows disagree on feature count");
    }
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (row.lifted[i].size() != dims[i]) {
        throw DimensionMismatch(i, dims[i], row.lifted[i].size());
      }
    }
  }
  const TnTopology topology = TrimBonds(
      config.topology == TopologyKind::kTensorTrain
          ? TnTopology::TensorTrain(dims, config.bond_dim)
          : TnTopology::BinaryTree(dims, config.bond_dim));
  AlsSolver solver(data, topology, InitialCores(topology, config.seed));
  FitReport report;
  report.training_rows = data.rows.size();
  report.teacher_evaluations = data.teacher_evaluations;
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < config.max_sweeps; ++s) {
    const double mse = solver.Sweep();
    const double r2 = solver.RSquared(mse);
    report.train_mse_history.push_back(mse);
    report.train_r2_history.push_back(r2);
    report.sweeps = s + 1;
    report.train_r2 = r2;
    TNSHAP_LOG(kDebug) << "sweep " << s + 1 << " mse " << mse
                                 << " r2 " << r2;
    const double progress = solver.Progress(mse);
    if (progress - previous < config.tolerance) {
      report.converged = true;
      break;
    }
    previous = progress;
  }
  report.tikhonov_fallbacks = solver.fallbacks();
  report.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return {TensorNetworkModel(topology, solver.TakeCores()), std::move(report)};
}

std::optional<double> RSquared(std::span<const double> truth,
                               std::span<const double> predicted) {
  if (truth.size() != predicted.size()) {
    throw InvalidArgument("R^2 inputs differ in length");
  }
  if (truth.empty()) return std::nullopt;
  double mean = 0.0;
  for (double v : truth) mean += v;
  mean /= static_cast<double>(truth.size());
  double ss_tot = 0.0;
  double ss_res = 0.0;
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ss_tot += (truth[i] - mean) * (truth[i] - mean);
    ss_res += (truth[i] - predicted[i]) * (truth[i] - predicted[i]);
    norm_sq += truth[i] * truth[i];
  }
  if (ss_tot == 0.0 || ss_tot <= 1e-24 * norm_sq) return std::nullopt;
  return 1.0 - ss_res / ss_tot;
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("cosine inputs differ in length");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 && nb == 0.0) return 1.0;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

double MeanSquaredError(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("MSE inputs differ in length");
  if (a.empty()) return 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
  return ss / static_cast<double>(a.size());
}

std::vector<QualityMetrics> EvalQuality(
    const TensorNetworkModel& student, const TensorNetworkModel& teacher,
    const FeatureMaps& maps, std::span<const std::vector<double>> instances,
    std::span<const std::size_t> orders) {
  const std::size_t n = teacher.n();
  if (student.n() != n) throw InvalidArgument("student and teacher differ in n");
  std::vector<CoalitionTable> tables;
  for (const auto& x : instances) tables.push_back(EnumerateGame(teacher, maps, x));
  std::vector<QualityMetrics> out;
  for (std::size_t k : orders) {
    if (k < 1 || k > n) throw InvalidArgument("order out of range for n");
    std::vector<double> truth;
    std::vector<double> predicted;
    for (std::size_t s = 0; s < instances.size(); ++s) {
      const AttributionSet mine = Explain(student, maps, instances[s], k);
      const AttributionSet exact = ExactSii(tables[s], k);
      for (std::size_t e = 0; e < exact.entries.size(); ++e) {
        truth.push_back(exact.entries[e].value);
        predicted.push_back(mine.entries[e].value);
      }
    }
    QualityMetrics q;
    q.order = k;
    q.count = truth.size();
    q.r2 = RSquared(truth, predicted);
    q.cosine = CosineSimilarity(truth, predicted);
    q.mse = MeanSquaredError(truth, predicted);
    out.push_back(q);
  }
  return out;
}

}  // namespace tnshap
