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

#ifndef TNSHAP_TENSOR_NETWORK_H_
#define TNSHAP_TENSOR_NETWORK_H_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tnshap/dense_tensor.h"

namespace tnshap {

enum class TopologyKind { kTensorTrain, kBalancedBinaryTree };

// Shape description of a tensor network.
//
// Tensor train: n cores in a chain, core i has shape (b_{i-1}, d_i, b_i) with
// b_0 = b_n = 1. `bond_dims` lists the n-1 internal edges in chain order.
//
// Balanced binary tree: the n features are padded up to the next power of two
// (at least 2) with dimension-1 dummy leaves whose input is the scalar 1. Nodes
// are stored in BFS (heap) order: node 0 is the root, the children of node j
// are 2j+1 and 2j+2, and the last `num_leaves()` nodes are the leaves, left to
// right. Every non-root node j owns the edge to its parent; `bond_dims[j-1]` is
// its extent, so bond dims are listed in BFS order too. Core shapes:
//   root      (b_left, b_right)
//   internal  (b_left, b_right, b_parent)
//   leaf      (d_i, b_parent), dummy leaves (1, b_parent)
struct TnTopology {
  TopologyKind kind = TopologyKind::kTensorTrain;
  std::size_t n = 0;
  std::vector<std::size_t> phys_dims;
  std::vector<std::size_t> bond_dims;

  static TnTopology TensorTrain(std::vector<std::size_t> phys_dims,
                                std::vector<std::size_t> bond_dims);
  static TnTopology TensorTrain(std::vector<std::size_t> phys_dims,
                                std::size_t bond);
  static TnTopology BinaryTree(std::vector<std::size_t> phys_dims,
                               std::vector<std::size_t> bond_dims);
  static TnTopology BinaryTree(std::vector<std::size_t> phys_dims,
                               std::size_t bond);

  // Throws InvalidArgument when an invariant does not hold.
  void Validate() const;

  std::size_t num_leaves() const;  // padded leaf count; n for tensor trains
  std::size_t num_cores() const;
  std::size_t num_edges() const;   // == bond_dims.size() when valid
  std::vector<std::vector<std::size_t>> CoreShapes() const;

  bool operator==(const TnTopology&) const = default;
};

// Number of edges a topology of this kind has for n features.
std::size_t EdgeCount(TopologyKind kind, std::size_t n);

// Largest bond product across a cut that splits the network into two
// connected parts. In a tree every such cut crosses exactly one edge, so this
// is the largest bond dimension (1 for an edgeless network).
std::size_t CutRank(const TnTopology& topology);

// Lowers every bond to the largest rank its cut can carry: the smaller of
// the physical-dimension products on either side. The set of representable
// maps is unchanged.
TnTopology TrimBonds(const TnTopology& topology);

// One leg of a core in the generic graph view.
struct CoreAxis {
  enum class Kind { kPhysical, kDummy, kBond };
  Kind kind;
  std::size_t index;  // feature for kPhysical, edge for kBond, unused for kDummy
};

// Graph view shared by both topologies: cores are nodes, bonds are edges.
struct TnGraph {
  std::vector<std::vector<CoreAxis>> axes;                 // per core
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // core endpoints
};

TnGraph BuildGraph(const TnTopology& topology);

// A topology plus its cores; realizes the multilinear map
//   g(x_1, ..., x_n) = T x_1 x_2 ... x_n  (mode products).
// Immutable after construction apart from the forward counter, so Forward is
// safe to call from many threads.
class TensorNetworkModel {
 public:
  TensorNetworkModel(TnTopology topology, std::vector<DenseTensor> cores);

  TensorNetworkModel(const TensorNetworkModel& other);
  TensorNetworkModel& operator=(const TensorNetworkModel& other);
  TensorNetworkModel(TensorNetworkModel&& other) noexcept;
  TensorNetworkModel& operator=(TensorNetworkModel&& other) noexcept;

  const TnTopology& topology() const { return topology_; }
  const std::vector<DenseTensor>& cores() const { return cores_; }
  std::size_t n() const { return topology_.n; }
  std::span<const std::size_t> phys_dims() const { return topology_.phys_dims; }

  // Contracts every physical leg with its input vector. inputs[i] must have
  // length phys_dims[i]; throws DimensionMismatch naming the 0-based mode.
  // Adds one to the forward counter.
  double Forward(std::span<const std::vector<double>> inputs) const;

  std::uint64_t forward_count() const {
    return forwards_.load(std::memory_order_relaxed);
  }
  void ResetForwardCount() const {
    forwards_.store(0, std::memory_order_relaxed);
  }

 private:
  double ForwardTrain(std::span<const std::vector<double>> inputs) const;
  double ForwardTree(std::span<const std::vector<double>> inputs) const;

  TnTopology topology_;
  std::vector<DenseTensor> cores_;
  mutable std::atomic<std::uint64_t> forwards_{0};
};

inline double TnForward(const TensorNetworkModel& model,
                        std::span<const std::vector<double>> inputs) {
  return model.Forward(inputs);
}

inline constexpr std::size_t kDefaultMaterializeLimit = std::size_t{1} << 20;

// Full coefficient tensor of shape phys_dims. Refuses with SizeLimitExceeded
// when product(phys_dims) > limit.
DenseTensor MaterializeFull(const TensorNetworkModel& model,
                            std::size_t limit = kDefaultMaterializeLimit);

// Dense mode product T x_1 ... x_n, used to cross-check Forward.
double DenseModeProduct(const DenseTensor& tensor,
                        std::span<const std::vector<double>> inputs);

}  // namespace tnshap

#endif  // TNSHAP_TENSOR_NETWORK_H_
