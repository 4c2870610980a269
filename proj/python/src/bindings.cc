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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "tnshap/attribute.h"
#include "tnshap/errors.h"
#include "tnshap/fit.h"
#include "tnshap/io.h"
#include "tnshap/oracle.h"
#include "tnshap/teachers.h"

namespace py = pybind11;

namespace tnshap {
namespace {

using Entries = std::vector<std::tuple<std::vector<std::size_t>, double>>;

// One-based subsets, matching the CSV output of the command-line tool.
Entries ToEntries(const AttributionSet& set) {
  Entries out;
  for (const AttributionEntry& e : set.entries) {
    std::vector<std::size_t> subset;
    for (std::size_t i : e.subset) subset.push_back(i + 1);
    out.emplace_back(std::move(subset), e.value);
  }
  return out;
}

FeatureMaps MapsFor(std::size_t n, const std::string& lift) {
  return FeatureMaps(n, ParseLiftSpec(lift));
}

}  // namespace
}  // namespace tnshap

PYBIND11_MODULE(_tnshap, m) {
  using namespace tnshap;
  m.doc() = "Exact Shapley values and interaction indices on tensor networks";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<ModelFile>(m, "Model")
      .def_static(
          "from_json", [](const std::string& text) { return ModelFromJson(text, "json"); },
          py::arg("text"))
      .def_static("load", &ReadModel, py::arg("path"))
      .def("to_json", [](const ModelFile& f) { return ModelToJson(f.model, f.maps); })
      .def("save", [](const ModelFile& f, const std::string& path) {
        WriteModel(path, f.model, f.maps);
      })
      .def_property_readonly("n", [](const ModelFile& f) { return f.model.n(); })
      .def_property_readonly("topology",
                             [](const ModelFile& f) { return TopologyName(f.model.topology().kind); })
      .def_property_readonly("cut_rank",
                             [](const ModelFile& f) { return CutRank(f.model.topology()); })
      .def(
          "__call__",
          [](const ModelFile& f, const std::vector<double>& x) {
            return f.model.Forward(LiftInstance(f.maps, x));
          },
          py::arg("x"))
      .def(
          "explain",
          [](const ModelFile& f, const std::vector<double>& x, std::size_t k,
             const std::string& mode) {
            py::gil_scoped_release release;
            return ToEntries(Explain(f.model, f.maps, x, k, ParseMode(mode)));
          },
          py::arg("x"), py::arg("k") = 1, py::arg("mode") = "auto")
      .def(
          "exact",
          [](const ModelFile& f, const std::vector<double>& x, std::size_t k) {
            return ToEntries(ExactSii(EnumerateGame(f.model, f.maps, x), k));
          },
          py::arg("x"), py::arg("k") = 1);

  m.def(
      "tree_teacher",
      [](std::size_t n, std::size_t bond, std::uint64_t seed, const std::string& lift) {
        const FeatureMaps maps = MapsFor(n, lift);
        return ModelFile{GenTreeTeacher(n, bond, seed, maps), maps};
      },
      py::arg("n"), py::arg("bond"), py::arg("seed") = 0, py::arg("lift") = "binary");
  m.def(
      "cp_teacher",
      [](std::size_t n, std::size_t rank, std::uint64_t seed, const std::string& lift) {
        const FeatureMaps maps = MapsFor(n, lift);
        return ModelFile{GenCpTeacher(n, rank, seed, maps).ToTensorTrain(), maps};
      },
      py::arg("n"), py::arg("rank"), py::arg("seed") = 0, py::arg("lift") = "binary");
  m.def(
      "fit",
      [](const ModelFile& teacher, const std::vector<double>& x0, const std::string& config) {
        const FitConfig c = FitConfigFromJson(
            config.empty() ? nlohmann::json{{"version", 1}} : nlohmann::json::parse(config));
        py::gil_scoped_release release;
        const LiftedFunction f = [&](std::span<const std::vector<double>> lifted) {
          return teacher.model.Forward(lifted);
        };
        auto [student, report] = FitStudent(BuildTrainingSet(f, teacher.maps, x0, c), c);
        return std::make_tuple(ModelFile{std::move(student), teacher.maps},
                               FitReportToJson(report).dump());
      },
      py::arg("teacher"), py::arg("x0"), py::arg("config") = "");
}
