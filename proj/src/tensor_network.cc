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

#include "tnshap/tensor_network.h"

#include <algorithm>
#include <limits>
#include <string>
#include <utility>

#include "tnshap/errors.h"

namespace tnshap {
namespace {

std::size_t TreeLeaves(std::size_t n) {
  std::size_t leaves = 2;
  while (leaves < n) leaves *= 2;
  return leaves;
}

}  // namespace

std::size_t EdgeCount(TopologyKind kind, std::size_t n) {
  if (n == 0) return 0;
  if (kind == TopologyKind::kTensorTrain) return n - 1;
  return 2 * TreeLeaves(n) - 2;
}

TnTopology TnTopology::TensorTrain(std::vector<std::size_t> phys_dims,
                                   std::vector<std::size_t> bond_dims) {
  TnTopology t;
  t.kind = TopologyKind::kTensorTrain;
  t.n = phys_dims.size();
  t.phys_dims = std::move(phys_dims);
  t.bond_dims = std::move(bond_dims);
  t.Validate();
  return t;
}

TnTopology TnTopology::TensorTrain(std::vector<std::size_t> phys_dims,
                                   std::size_t bond) {
  const std::size_t edges = EdgeCount(TopologyKind::kTensorTrain, phys_dims.size());
  return TensorTrain(std::move(phys_dims), std::vector<std::size_t>(edges, bond));
}

TnTopology TnTopology::BinaryTree(std::vector<std::size_t> phys_dims,
                                  std::vector<std::size_t> bond_dims) {
  TnTopology t;
  t.kind = TopologyKind::kBalancedBinaryTree;
  t.n = phys_dims.size();
  t.phys_dims = std::move(phys_dims);
  t.bond_dims = std::move(bond_dims);
  t.Validate();
  return t;
}

TnTopology TnTopology::BinaryTree(std::vector<std::size_t> phys_dims,
                                  std::size_t bond) {
  const std::size_t edges =
      EdgeCount(TopologyKind::kBalancedBinaryTree, phys_dims.size());
  return BinaryTree(std::move(phys_dims), std::vector<std::size_t>(edges, bond));
}

void TnTopology::Validate() const {
  if (n == 0) throw InvalidArgument("topology needs at least one feature");
  if (phys_dims.size() != n) {
    throw InvalidArgument("phys_dims has " + std::to_string(phys_dims.size()) +
                          " entries, expected n = " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (phys_dims[i] < 1) {
      throw InvalidArgument("phys_dims[" + std::to_string(i) + "] must be >= 1");
    }
  }
  const std::size_t edges = EdgeCount(kind, n);
  if (bond_dims.size() != edges) {
    throw InvalidArgument("bond_dims has " + std::to_string(bond_dims.size()) +
                          " entries, expected " + std::to_string(edges));
  }
  for (std::size_t e = 0; e < edges; ++e) {
    if (bond_dims[e] < 1) {
      throw InvalidArgument("bond_dims[" + std::to_string(e) + "] must be >= 1");
    }
  }
}

std::size_t TnTopology::num_leaves() const {
  return kind == TopologyKind::kTensorTrain ? n : TreeLeaves(n);
}

std::size_t TnTopology::num_cores() const {
  return kind == TopologyKind::kTensorTrain ? n : 2 * TreeLeaves(n) - 1;
}

std::size_t TnTopology::num_edges() const { return EdgeCount(kind, n); }

std::vector<std::vector<std::size_t>> TnTopology::CoreShapes() const {
  std::vector<std::vector<std::size_t>> shapes;
  if (kind == TopologyKind::kTensorTrain) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t left = i == 0 ? 1 : bond_dims[i - 1];
      const std::size_t right = i + 1 == n ? 1 : bond_dims[i];
      shapes.push_back({left, phys_dims[i], right});
    }
    return shapes;
  }
  const std::size_t leaves = TreeLeaves(n);
  const std::size_t internal = leaves - 1;
  for (std::size_t j = 0; j < 2 * leaves - 1; ++j) {
    if (j < internal) {
      const std::size_t left = bond_dims[2 * j];  // edge of node 2j+1
      const std::size_t right = bond_dims[2 * j + 1];
      if (j == 0) {
        shapes.push_back({left, right});
      } else {
        shapes.push_back({left, right, bond_dims[j - 1]});
      }
    } else {
      const std::size_t feature = j - internal;
      const std::size_t d = feature < n ? phys_dims[feature] : 1;
      shapes.push_back({d, bond_dims[j - 1]});
    }
  }
  return shapes;
}

std::size_t CutRank(const TnTopology& topology) {
  std::size_t rank = 1;
  for (std::size_t b : topology.bond_dims) rank = std::max(rank, b);
  return rank;
}

namespace {

std::size_t SaturatingMul(std::size_t a, std::size_t b) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  return a != 0 && b > kMax / a ? kMax : a * b;
}

}  // namespace

TnTopology TrimBonds(const TnTopology& topology) {
  topology.Validate();
  TnTopology out = topology;
  const std::size_t n = topology.n;
  if (topology.kind == TopologyKind::kTensorTrain) {
    std::vector<std::size_t> prefix(n + 1, 1);
    std::vector<std::size_t> suffix(n + 1, 1);
    for (std::size_t i = 0; i < n; ++i) {
      prefix[i + 1] = SaturatingMul(prefix[i], topology.phys_dims[i]);
      suffix[n - 1 - i] = SaturatingMul(suffix[n - i], topology.phys_dims[n - 1 - i]);
    }
    for (std::size_t e = 0; e + 1 < n; ++e) {
      out.bond_dims[e] = std::min({topology.bond_dims[e], prefix[e + 1], suffix[e + 1]});
    }
    return out;
  }
  const std::size_t leaves = TreeLeaves(n);
  const std::size_t nodes = 2 * leaves - 1;
  std::size_t total = 1;
  for (std::size_t d : topology.phys_dims) total = SaturatingMul(total, d);
  // Physical product below each node; dummy leaves contribute 1.
  std::vector<std::size_t> below(nodes, 1);
  for (std::size_t j = nodes; j-- > 0;) {
    if (j >= leaves - 1) {
      const std::size_t feature = j - (leaves - 1);
      below[j] = feature < n ? topology.phys_dims[feature] : 1;
    } else {
      below[j] = SaturatingMul(below[2 * j + 1], below[2 * j + 2]);
    }
  }
  for (std::size_t j = 1; j < nodes; ++j) {
    // The complement product is total / below[j] unless saturated.
    const std::size_t rest =
        total == std::numeric_limits<std::size_t>::max() ? total : total / below[j];
    out.bond_dims[j - 1] = std::min({topology.bond_dims[j - 1], below[j], rest});
  }
  return out;
}

TnGraph BuildGraph(const TnTopology& topology) {
  TnGraph graph;
  using Kind = CoreAxis::Kind;
  const std::size_t n = topology.n;
  if (topology.kind == TopologyKind::kTensorTrain) {
    // Boundary bonds of extent 1 are modelled as dummy legs.
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<CoreAxis> axes;
      axes.push_back(i == 0 ? CoreAxis{Kind::kDummy, 0}
                            : CoreAxis{Kind::kBond, i - 1});
      axes.push_back({Kind::kPhysical, i});
      axes.push_back(i + 1 == n ? CoreAxis{Kind::kDummy, 0}
                                : CoreAxis{Kind::kBond, i});
      graph.axes.push_back(std::move(axes));
    }
    for (std::size_t e = 0; e + 1 < n; ++e) graph.edges.emplace_back(e, e + 1);
    return graph;
  }
  const std::size_t leaves = TreeLeaves(n);
  const std::size_t internal = leaves - 1;
  for (std::size_t j = 0; j < 2 * leaves - 1; ++j) {
    std::vector<CoreAxis> axes;
    if (j < internal) {
      axes.push_back({Kind::kBond, 2 * j});
      axes.push_back({Kind::kBond, 2 * j + 1});
    } else {
      const std::size_t feature = j - internal;
      axes.push_back(feature < n ? CoreAxis{Kind::kPhysical, feature}
                                 : CoreAxis{Kind::kDummy, 0});
    }
    if (j > 0) axes.push_back({Kind::kBond, j - 1});
    graph.axes.push_back(std::move(axes));
  }
  for (std::size_t j = 1; j < 2 * leaves - 1; ++j) {
    graph.edges.emplace_back((j - 1) / 2, j);
  }
  return graph;
}

TensorNetworkModel::TensorNetworkModel(TnTopology topology,
                                       std::vector<DenseTensor> cores)
    : topology_(std::move(topology)), cores_(std::move(cores)) {
  topology_.Validate();
  const auto shapes = topology_.CoreShapes();
  if (shapes.size() != cores_.size()) {
    throw InvalidArgument("expected " + std::to_string(shapes.size()) +
                          " cores, got " + std::to_string(cores_.size()));
  }
  for (std::size_t c = 0; c < shapes.size(); ++c) {
    if (cores_[c].shape() != shapes[c]) {
      throw InvalidArgument("core " + std::to_string(c) +
                            " shape does not match topology");
    }
  }
}

TensorNetworkModel::TensorNetworkModel(const TensorNetworkModel& other)
    : topology_(other.topology_), cores_(other.cores_) {}

TensorNetworkModel& TensorNetworkModel::operator=(
    const TensorNetworkModel& other) {
  topology_ = other.topology_;
  cores_ = other.cores_;
  forwards_.store(0, std::memory_order_relaxed);
  return *this;
}

TensorNetworkModel::TensorNetworkModel(TensorNetworkModel&& other) noexcept
    : topology_(std::move(other.topology_)), cores_(std::move(other.cores_)) {}

TensorNetworkModel& TensorNetworkModel::operator=(
    TensorNetworkModel&& other) noexcept {
  topology_ = std::move(other.topology_);
  cores_ = std::move(other.cores_);
  forwards_.store(0, std::memory_order_relaxed);
  return *this;
}

double TensorNetworkModel::Forward(
    std::span<const std::vector<double>> inputs) const {
  if (inputs.size() != topology_.n) {
    throw InvalidArgument("expected " + std::to_string(topology_.n) +
                          " input vectors, got " + std::to_string(inputs.size()));
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].size() != topology_.phys_dims[i]) {
      throw DimensionMismatch(i, topology_.phys_dims[i], inputs[i].size());
    }
  }
  forwards_.fetch_add(1, std::memory_order_relaxed);
  return topology_.kind == TopologyKind::kTensorTrain ? ForwardTrain(inputs)
                                                      : ForwardTree(inputs);
}

// Left-to-right sweep carrying a (1 x bond) row vector.
double TensorNetworkModel::ForwardTrain(
    std::span<const std::vector<double>> inputs) const {
  std::vector<double> row{1.0};
  std::vector<double> next;
  for (std::size_t i = 0; i < cores_.size(); ++i) {
    const DenseTensor& core = cores_[i];
    const std::size_t left = core.extent(0);
    const std::size_t d = core.extent(1);
    const std::size_t right = core.extent(2);
    const double* data = core.data().data();
    const std::vector<double>& x = inputs[i];
    next.assign(right, 0.0);
    for (std::size_t a = 0; a < left; ++a) {
      if (row[a] == 0.0) continue;
      for (std::size_t p = 0; p < d; ++p) {
        const double coef = row[a] * x[p];
        if (coef == 0.0) continue;
        const double* slice = data + (a * d + p) * right;
        for (std::size_t b = 0; b < right; ++b) next[b] += coef * slice[b];
      }
    }
    row.swap(next);
  }
  return row[0];
}

// Leaves-to-root message passing over the heap-ordered tree.
double TensorNetworkModel::ForwardTree(
    std::span<const std::vector<double>> inputs) const {
  const std::size_t leaves = topology_.num_leaves();
  const std::size_t internal = leaves - 1;
  const std::size_t num = cores_.size();
  // Offsets of each node's upward message in one flat buffer.
  std::vector<std::size_t> offset(num + 1, 0);
  for (std::size_t j = 1; j < num; ++j) {
    offset[j + 1] = offset[j] + topology_.bond_dims[j - 1];
  }
  std::vector<double> msg(offset[num], 0.0);
  for (std::size_t j = num; j-- > 1;) {
    const DenseTensor& core = cores_[j];
    const double* data = core.data().data();
    double* out = msg.data() + offset[j];
    if (j >= internal) {
      const std::size_t feature = j - internal;
      const std::size_t bond = core.extent(1);
      if (feature >= topology_.n) {
        for (std::size_t c = 0; c < bond; ++c) out[c] = data[c];
        continue;
      }
      const std::vector<double>& x = inputs[feature];
      for (std::size_t p = 0; p < x.size(); ++p) {
        if (x[p] == 0.0) continue;
        const double* slice = data + p * bond;
        for (std::size_t c = 0; c < bond; ++c) out[c] += x[p] * slice[c];
      }
      continue;
    }
    const double* ml = msg.data() + offset[2 * j + 1];
    const double* mr = msg.data() + offset[2 * j + 2];
    const std::size_t bl = core.extent(0);
    const std::size_t br = core.extent(1);
    const std::size_t bp = core.extent(2);
    for (std::size_t a = 0; a < bl; ++a) {
      if (ml[a] == 0.0) continue;
      for (std::size_t b = 0; b < br; ++b) {
        const double coef = ml[a] * mr[b];
        if (coef == 0.0) continue;
        const double* slice = data + (a * br + b) * bp;
        for (std::size_t c = 0; c < bp; ++c) out[c] += coef * slice[c];
      }
    }
  }
  const DenseTensor& root = cores_[0];
  const double* ml = msg.data() + offset[1];
  const double* mr = msg.data() + offset[2];
  const std::size_t bl = root.extent(0);
  const std::size_t br = root.extent(1);
  double value = 0.0;
  for (std::size_t a = 0; a < bl; ++a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < br; ++b) acc += root[a * br + b] * mr[b];
    value += ml[a] * acc;
  }
  return value;
}

namespace {

// Dense tensor over a subtree's leaves (row-major in leaf order) with the
// parent bond as the trailing axis, flattened as (leaf_index, bond).
struct Partial {
  std::size_t rows;
  std::size_t bond;
  std::vector<double> data;
};

Partial MaterializeSubtree(const TensorNetworkModel& model, std::size_t node) {
  const TnTopology& topo = model.topology();
  const std::size_t internal = topo.num_leaves() - 1;
  const DenseTensor& core = model.cores()[node];
  if (node >= internal) {
    return {core.extent(0), core.extent(1),
            std::vector<double>(core.data().begin(), core.data().end())};
  }
  const Partial left = MaterializeSubtree(model, 2 * node + 1);
  const Partial right = MaterializeSubtree(model, 2 * node + 2);
  const std::size_t bl = core.extent(0);
  const std::size_t br = core.extent(1);
  const std::size_t bp = node == 0 ? 1 : core.extent(2);
  Partial out{left.rows * right.rows, bp,
              std::vector<double>(left.rows * right.rows * bp, 0.0)};
  const double* data = core.data().data();
  for (std::size_t il = 0; il < left.rows; ++il) {
    for (std::size_t ir = 0; ir < right.rows; ++ir) {
      double* dst = out.data.data() + (il * right.rows + ir) * bp;
      for (std::size_t a = 0; a < bl; ++a) {
        const double la = left.data[il * bl + a];
        if (la == 0.0) continue;
        for (std::size_t b = 0; b < br; ++b) {
          const double coef = la * right.data[ir * br + b];
          if (coef == 0.0) continue;
          const double* slice = data + (a * br + b) * bp;
          for (std::size_t c = 0; c < bp; ++c) dst[c] += coef * slice[c];
        }
      }
    }
  }
  return out;
}

}  // namespace

DenseTensor MaterializeFull(const TensorNetworkModel& model, std::size_t limit) {
  const TnTopology& topo = model.topology();
  unsigned long long required = 1;
  for (std::size_t d : topo.phys_dims) {
    required = required > (~0ULL) / d ? ~0ULL : required * d;
  }
  if (required > limit) {
    throw SizeLimitExceeded("materialize_full", required, limit);
  }
  std::vector<std::size_t> shape(topo.phys_dims.begin(), topo.phys_dims.end());
  if (topo.kind == TopologyKind::kTensorTrain) {
    std::size_t rows = 1;
    std::size_t bond = 1;
    std::vector<double> partial{1.0};
    for (const DenseTensor& core : model.cores()) {
      const std::size_t d = core.extent(1);
      const std::size_t right = core.extent(2);
      std::vector<double> next(rows * d * right, 0.0);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t a = 0; a < bond; ++a) {
          const double pa = partial[r * bond + a];
          if (pa == 0.0) continue;
          for (std::size_t p = 0; p < d; ++p) {
            const double* slice = core.data().data() + (a * d + p) * right;
            double* dst = next.data() + (r * d + p) * right;
            for (std::size_t b = 0; b < right; ++b) dst[b] += pa * slice[b];
          }
        }
      }
      rows *= d;
      bond = right;
      partial.swap(next);
    }
    return DenseTensor(std::move(shape), std::move(partial));
  }
  Partial root = MaterializeSubtree(model, 0);
  // Dummy leaves have extent 1 and sit after the real features, so the leaf
  // ordering already matches the row-major layout of phys_dims.
  return DenseTensor(std::move(shape), std::move(root.data));
}

double DenseModeProduct(const DenseTensor& tensor,
                        std::span<const std::vector<double>> inputs) {
  if (inputs.size() != tensor.rank()) {
    throw InvalidArgument("mode product needs one vector per mode");
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].size() != tensor.extent(i)) {
      throw DimensionMismatch(i, tensor.extent(i), inputs[i].size());
    }
  }
  // Contract the last mode repeatedly.
  std::vector<double> current(tensor.data().begin(), tensor.data().end());
  for (std::size_t mode = inputs.size(); mode-- > 0;) {
    const std::size_t d = tensor.extent(mode);
    const std::size_t outer = current.size() / d;
    std::vector<double> next(outer, 0.0);
    for (std::size_t o = 0; o < outer; ++o) {
      double acc = 0.0;
      for (std::size_t p = 0; p < d; ++p) acc += current[o * d + p] * inputs[mode][p];
      next[o] = acc;
    }
    current.swap(next);
  }
  return current[0];
}

}  // namespace tnshap
