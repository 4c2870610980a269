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

#include <cmath>
#include <random>

#include "doctest.h"
#include "reference.h"
#include "tnshap/dense_tensor.h"
#include "tnshap/errors.h"
#include "tnshap/tensor_network.h"

namespace tnshap {
namespace {

using testing::RandomModel;
using testing::TermsModel;

std::vector<std::vector<double>> RandomInputs(std::span<const std::size_t> dims,
                                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<std::vector<double>> in;
  for (std::size_t d : dims) {
    std::vector<double> v(d);
    for (double& x : v) x = u(rng);
    in.push_back(v);
  }
  return in;
}

TEST_CASE("dense tensor validates shape and data") {
  DenseTensor t({2, 3});
  CHECK(t.size() == 6);
  CHECK(t.rank() == 2);
  t.at({1, 2}) = 5.0;
  CHECK(t[5] == 5.0);
  CHECK_THROWS_AS(DenseTensor({2, 0}), InvalidArgument);
  CHECK_THROWS_AS(DenseTensor({2, 2}, {1.0, 2.0, 3.0}), InvalidArgument);
  CHECK_THROWS_AS(t.at({2, 0}), InvalidArgument);
}

TEST_CASE("constant rank-1 train evaluates to 1") {
  const TensorNetworkModel m = TermsModel(3, {{0, 1.0}});
  const std::vector<std::vector<double>> in{{0.3, 1.0}, {-7.0, 1.0}, {2.0, 1.0}};
  CHECK(m.Forward(in) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("single monomial x1 x2") {
  const TensorNetworkModel m = TermsModel(2, {{0b11, 1.0}});
  CHECK(m.Forward(std::vector<std::vector<double>>{{1, 1}, {1, 1}}) == 1.0);
  CHECK(m.Forward(std::vector<std::vector<double>>{{0, 1}, {1, 1}}) == 0.0);
}

TEST_CASE("forward rejects the offending mode") {
  const TensorNetworkModel m = TermsModel(3, {{0b111, 1.0}});
  const std::vector<std::vector<double>> bad{{1, 1}, {1, 1, 1}, {1, 1}};
  try {
    m.Forward(bad);
    FAIL("expected DimensionMismatch");
  } catch (const DimensionMismatch& e) {
    CHECK(e.mode() == 1);
  }
  CHECK_THROWS_AS(m.Forward(std::vector<std::vector<double>>{{1, 1}}), InvalidArgument);
}

TEST_CASE("forward counter counts calls") {
  const TensorNetworkModel m = TermsModel(2, {{0b01, 1.0}});
  m.ResetForwardCount();
  const std::vector<std::vector<double>> in{{1, 1}, {1, 1}};
  for (int i = 0; i < 7; ++i) m.Forward(in);
  CHECK(m.forward_count() == 7);
  const TensorNetworkModel copy = m;
  CHECK(copy.forward_count() == 0);
}

TEST_CASE("cut rank") {
  CHECK(CutRank(TnTopology::TensorTrain({2, 2, 2, 2, 2}, 4)) == 4);
  CHECK(CutRank(TnTopology::BinaryTree({2, 2, 2, 2}, 3)) == 3);
  CHECK(CutRank(TnTopology::TensorTrain({2, 2, 2, 2}, std::vector<std::size_t>{2, 8, 2})) == 8);
  CHECK(CutRank(TnTopology::TensorTrain({2}, std::vector<std::size_t>{})) == 1);
  // Raising any bond never lowers the cut rank.
  TnTopology t = TnTopology::BinaryTree({2, 2, 2, 2, 2}, 2);
  std::size_t previous = CutRank(t);
  for (std::size_t e = 0; e < t.bond_dims.size(); ++e) {
    t.bond_dims[e] += 3;
    CHECK(CutRank(t) >= previous);
    previous = CutRank(t);
  }
}

TEST_CASE("topology shapes") {
  const TnTopology tt = TnTopology::TensorTrain({2, 3, 4}, std::vector<std::size_t>{5, 6});
  const auto shapes = tt.CoreShapes();
  CHECK(shapes[0] == std::vector<std::size_t>{1, 2, 5});
  CHECK(shapes[1] == std::vector<std::size_t>{5, 3, 6});
  CHECK(shapes[2] == std::vector<std::size_t>{6, 4, 1});
  // Three leaves pad to four; the dummy leaf has extent 1.
  const TnTopology tree = TnTopology::BinaryTree({2, 2, 2}, 3);
  CHECK(tree.num_leaves() == 4);
  CHECK(tree.num_cores() == 7);
  CHECK(tree.bond_dims.size() == 6);
  CHECK(tree.CoreShapes()[6] == std::vector<std::size_t>{1, 3});
  CHECK_THROWS_AS(TnTopology::TensorTrain({2, 2}, std::vector<std::size_t>{0}).Validate(),
                  InvalidArgument);
  CHECK_THROWS_AS(TnTopology::TensorTrain({2, 2}, std::vector<std::size_t>{2, 2}).Validate(),
                  InvalidArgument);
}

TEST_CASE("materialize x1 x2 has a single data-data entry") {
  const TensorNetworkModel m = TermsModel(2, {{0b11, 1.0}});
  const DenseTensor t = MaterializeFull(m);
  CHECK(t.shape() == std::vector<std::size_t>{2, 2});
  // Contract with each pair of basis vectors.
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      std::vector<std::vector<double>> in{{0, 0}, {0, 0}};
      in[0][a] = 1;
      in[1][b] = 1;
      CHECK(m.Forward(in) == t.at({a, b}));
      CHECK(t.at({a, b}) == (a == 0 && b == 0 ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("materialize constant model") {
  const TensorNetworkModel m = TermsModel(3, {{0, 2.5}});
  const DenseTensor t = MaterializeFull(m);
  for (std::size_t f = 0; f + 1 < t.size(); ++f) CHECK(t[f] == 0.0);
  CHECK(t[t.size() - 1] == 2.5);
}

TEST_CASE("materialize agrees with forward and the naive contraction") {
  std::mt19937_64 rng(11);
  const std::vector<TnTopology> topologies{
      TnTopology::TensorTrain({2, 3, 2, 4}, 3),
      TnTopology::BinaryTree({2, 2, 3, 2}, 3),
      TnTopology::BinaryTree({2, 3, 2, 2, 2}, 2),
      TnTopology::BinaryTree({3}, 2),
      TnTopology::TensorTrain({5}, std::vector<std::size_t>{}),
  };
  for (const TnTopology& topo : topologies) {
    const TensorNetworkModel m = RandomModel(topo, rng);
    const DenseTensor t = MaterializeFull(m);
    for (int trial = 0; trial < 100; ++trial) {
      const auto in = RandomInputs(topo.phys_dims, rng);
      const double f = m.Forward(in);
      CHECK(std::abs(f - DenseModeProduct(t, in)) < 1e-12 * std::max(1.0, std::abs(f)));
      CHECK(std::abs(f - testing::NaiveContraction(t, in)) <
            1e-12 * std::max(1.0, std::abs(f)));
    }
  }
}

TEST_CASE("materialize refuses oversized tensors") {
  const TnTopology topo = TnTopology::TensorTrain(std::vector<std::size_t>(21, 2), 1);
  std::mt19937_64 rng(1);
  const TensorNetworkModel m = RandomModel(topo, rng);
  try {
    MaterializeFull(m);
    FAIL("expected SizeLimitExceeded");
  } catch (const SizeLimitExceeded& e) {
    CHECK(e.required() == (1ull << 21));
  }
  CHECK_NOTHROW(MaterializeFull(m, std::size_t{1} << 21));
}

TEST_CASE("forward is multilinear in every mode") {
  std::mt19937_64 rng(5);
  for (const TnTopology& topo : {TnTopology::TensorTrain({2, 3, 2}, 2),
                                 TnTopology::BinaryTree({2, 2, 3, 2, 2}, 3)}) {
    const TensorNetworkModel m = RandomModel(topo, rng);
    for (std::size_t mode = 0; mode < topo.n; ++mode) {
      auto in = RandomInputs(topo.phys_dims, rng);
      const auto a = RandomInputs(topo.phys_dims, rng)[mode];
      const auto b = RandomInputs(topo.phys_dims, rng)[mode];
      const double s = 0.7;
      const double t = -1.3;
      std::vector<double> mix(a.size());
      for (std::size_t c = 0; c < a.size(); ++c) mix[c] = s * a[c] + t * b[c];
      in[mode] = a;
      const double fa = m.Forward(in);
      in[mode] = b;
      const double fb = m.Forward(in);
      in[mode] = mix;
      const double fm = m.Forward(in);
      const double expected = s * fa + t * fb;
      CHECK(std::abs(fm - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("trimmed bonds keep the representable maps") {
  const TnTopology tt = TrimBonds(TnTopology::TensorTrain({2, 2, 2, 2}, 8));
  CHECK(tt.bond_dims == std::vector<std::size_t>{2, 4, 2});
  const TnTopology tree = TrimBonds(TnTopology::BinaryTree({2, 2, 2, 2}, 8));
  CHECK(tree.bond_dims == std::vector<std::size_t>{4, 4, 2, 2, 2, 2});
  const TnTopology padded = TrimBonds(TnTopology::BinaryTree({2, 2, 2}, 8));
  // Leaves 0..2 carry features, leaf 3 is a dummy of extent 1.
  CHECK(padded.bond_dims == std::vector<std::size_t>{2, 2, 2, 2, 2, 1});
  const TnTopology small = TrimBonds(TnTopology::BinaryTree({2, 2, 2, 2}, 3));
  CHECK(small.bond_dims == std::vector<std::size_t>{3, 3, 2, 2, 2, 2});
  CHECK(CutRank(TrimBonds(TnTopology::BinaryTree(std::vector<std::size_t>(8, 2), 14))) == 14);
}

TEST_CASE("graph view lists every bond once") {
  const TnGraph g = BuildGraph(TnTopology::BinaryTree({2, 2, 2, 2}, 3));
  CHECK(g.axes.size() == 7);
  CHECK(g.edges.size() == 6);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    CHECK(g.edges[e].first == e / 2);
    CHECK(g.edges[e].second == e + 1);
  }
}

}  // namespace
}  // namespace tnshap
