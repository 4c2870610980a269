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

#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "reference.h"
#include "tnshap/errors.h"
#include "tnshap/io.h"

namespace tnshap {
namespace {

TEST_CASE("model json round trip is exact") {
  std::mt19937_64 rng(7);
  const FeatureMaps maps{LiftSpec::Binary(), LiftSpec::Polynomial(2), LiftSpec::Fourier(1, 2.5),
                         LiftSpec::Binary(), LiftSpec::Binary()};
  for (const TnTopology& topo : {TnTopology::TensorTrain(PhysDims(maps), 3),
                                 TnTopology::BinaryTree(PhysDims(maps), 2)}) {
    const auto model = testing::RandomModel(topo, rng);
    const std::string text = ModelToJson(model, maps);
    const ModelFile back = ModelFromJson(text);
    CHECK(back.maps == maps);
    CHECK(ModelToJson(back.model, back.maps) == text);
    const auto lx = LiftInstance(maps, testing::RandomPoint(5, rng));
    CHECK(back.model.Forward(lx) == model.Forward(lx));
  }
}

TEST_CASE("feature maps default from core shapes") {
  std::mt19937_64 rng(8);
  const FeatureMaps maps{LiftSpec::Binary(), LiftSpec::Polynomial(3)};
  const auto model = testing::RandomModel(TnTopology::TensorTrain(PhysDims(maps), 2), rng);
  auto j = nlohmann::json::parse(ModelToJson(model, maps));
  j.erase("feature_maps");
  CHECK(ModelFromJson(j.dump()).maps == maps);
}

TEST_CASE("malformed models are parse errors") {
  CHECK_THROWS_AS(ModelFromJson("{"), ParseError);
  CHECK_THROWS_AS(ModelFromJson("[]"), ParseError);
  CHECK_THROWS_AS(ModelFromJson(R"({"version": 2, "topology": "tt", "n": 1})"), ParseError);
  const auto model = testing::TermsModel(2, {{0b11, 1.0}});
  auto j = nlohmann::json::parse(ModelToJson(model, BinaryMaps(2)));
  j["cores"][0]["data"].push_back(1.0);
  CHECK_THROWS(ModelFromJson(j.dump()));
  CHECK_THROWS_AS(ReadModel("/nonexistent/model.json"), IoError);
}

TEST_CASE("instance csv parsing") {
  std::istringstream good("f1,f2\n0.5,-1\n\n1e-3, 2\n");
  const auto rows = ParseInstances(good, "x.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == 1e-3);
  CHECK(rows[1][1] == 2.0);
  std::istringstream bad_header("a,b\n1,2\n");
  CHECK_THROWS_AS(ParseInstances(bad_header, "x.csv"), ParseError);
  std::istringstream bad_width("f1,f2\n1,2\n3\n");
  try {
    ParseInstances(bad_width, "x.csv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream bad_number("f1\nabc\n");
  CHECK_THROWS_AS(ParseInstances(bad_number, "x.csv"), ParseError);
  std::istringstream empty("");
  CHECK_THROWS_AS(ParseInstances(empty, "x.csv"), ParseError);
}

TEST_CASE("instance csv round trip") {
  const std::vector<std::vector<double>> rows{{0.1, 1.0 / 3.0}, {-2.5, 1e-300}};
  std::stringstream ss;
  WriteInstances(ss, rows);
  CHECK(ParseInstances(ss, "mem") == rows);
}

TEST_CASE("attribution rows") {
  AttributionSet set;
  set.order = 2;
  set.entries.push_back({{0, 2}, 0.25, false});
  set.entries.push_back({{1, 2}, -1.0, true});
  std::ostringstream out;
  WriteAttributionHeader(out);
  WriteAttributionRows(out, {3, set});
  CHECK(out.str() ==
        "instance_id,order,subset,value,flag\n"
        "3,2,1;3,0.25,\n"
        "3,2,2;3,-1,ill_conditioned\n");
  CHECK(FormatDouble(0.1) == "0.10000000000000001");
  CHECK_THROWS_AS(FormatDouble(std::nan("")), InvalidArgument);
}

TEST_CASE("fit config json") {
  FitConfig c;
  c.bond_dim = 7;
  c.topology = TopologyKind::kTensorTrain;
  c.sigma = 0.3;
  const FitConfig back = FitConfigFromJson(FitConfigToJson(c));
  CHECK(back.bond_dim == 7);
  CHECK(back.topology == TopologyKind::kTensorTrain);
  CHECK(back.sigma == 0.3);
  auto j = FitConfigToJson(c);
  j["bogus"] = 1;
  CHECK_THROWS_AS(FitConfigFromJson(j), ParseError);
  CHECK_THROWS_AS(FitConfigFromJson(nlohmann::json{{"version", 3}}), ParseError);
  const FitConfig partial = FitConfigFromJson(nlohmann::json{{"version", 1}, {"bond_dim", 2}});
  CHECK(partial.bond_dim == 2);
  CHECK(partial.neighborhood_samples == 100);
}

TEST_CASE("topology names") {
  CHECK(ParseTopology("tt") == TopologyKind::kTensorTrain);
  CHECK(ParseTopology("btree") == TopologyKind::kBalancedBinaryTree);
  CHECK(TopologyName(TopologyKind::kTensorTrain) == "tt");
  CHECK_THROWS_AS(ParseTopology("mera"), InvalidArgument);
}

}  // namespace
}  // namespace tnshap
