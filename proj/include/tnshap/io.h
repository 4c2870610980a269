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

#ifndef TNSHAP_IO_H_
#define TNSHAP_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "tnshap/attribute.h"
#include "tnshap/fit.h"
#include "tnshap/lift.h"
#include "tnshap/tensor_network.h"

namespace tnshap {

// A model together with the feature maps that produce its inputs.
struct ModelFile {
  TensorNetworkModel model;
  FeatureMaps maps;
};

// Model JSON, version 1. Numbers are written with 17 significant digits so
// write -> read -> write is byte-stable. When `feature_maps` is absent on
// read, each feature gets Polynomial(d - 1) (Binary for d = 2).
std::string ModelToJson(const TensorNetworkModel& model, const FeatureMaps& maps);
ModelFile ModelFromJson(const std::string& text,
                        const std::string& source = "model");
void WriteModel(const std::string& path, const TensorNetworkModel& model,
                const FeatureMaps& maps);
ModelFile ReadModel(const std::string& path);

// Instance CSV: header f1,...,fn then one row per instance.
std::vector<std::vector<double>> ParseInstances(std::istream& in,
                                                const std::string& source);
std::vector<std::vector<double>> ReadInstances(const std::string& path);
void WriteInstances(std::ostream& out,
                    const std::vector<std::vector<double>>& instances);

// Attribution CSV: instance_id,order,subset,value,flag with 1-based
// semicolon-joined subsets. Sets must be grouped by instance then order.
struct InstanceAttributions {
  std::size_t instance_id = 0;
  AttributionSet set;
};
void WriteAttributionHeader(std::ostream& out);
void WriteAttributionRows(std::ostream& out, const InstanceAttributions& rows);

// "%.17g" formatting shared by every text writer.
std::string FormatDouble(double value);

// FitConfig JSON, version 1. Missing fields keep their defaults; unknown
// fields are rejected.
nlohmann::json FitConfigToJson(const FitConfig& config);
FitConfig FitConfigFromJson(const nlohmann::json& json,
                            const std::string& source = "fit config");
nlohmann::json QualityToJson(const QualityMetrics& q);
nlohmann::json FitReportToJson(const FitReport& report);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

TopologyKind ParseTopology(const std::string& name);
std::string TopologyName(TopologyKind kind);

}  // namespace tnshap

#endif  // TNSHAP_IO_H_
