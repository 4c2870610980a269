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

#include "tnshap/io.h"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tnshap/errors.h"

namespace tnshap {
namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

void AppendList(std::string& out, std::span<const std::size_t> values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(values[i]);
  }
  out += ']';
}

std::string MapToJson(const LiftSpec& spec) {
  std::string out = "{\"kind\": \"" + spec.name() + "\"";
  if (spec.kind != LiftSpec::Kind::kBinary) {
    out += ", \"k\": " + std::to_string(spec.degree);
  }
  if (spec.kind == LiftSpec::Kind::kFourier) {
    out += ", \"omega\": " + FormatDouble(spec.omega);
  }
  return out + "}";
}

LiftSpec MapFromJson(const json& j, const std::string& source) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ParseError(source, 0, "feature map needs a string \"kind\"");
  }
  const std::string kind = j["kind"];
  auto degree = [&]() {
    if (!j.contains("k") || !j["k"].is_number_integer()) {
      throw ParseError(source, 0, kind + " feature map needs integer \"k\"");
    }
    return j["k"].get<int>();
  };
  if (kind == "binary") return LiftSpec::Binary();
  if (kind == "poly") return LiftSpec::Polynomial(degree());
  if (kind == "fourier") {
    const int k = degree();
    if (!j.contains("omega") || !j["omega"].is_number()) {
      throw ParseError(source, 0, "fourier feature map needs \"omega\"");
    }
    return LiftSpec::Fourier(k, j["omega"].get<double>());
  }
  throw ParseError(source, 0, "unknown feature map kind \"" + kind + "\"");
}

std::vector<std::size_t> SizeList(const json& j, const char* field,
                                  const std::string& source) {
  if (!j.contains(field) || !j[field].is_array()) {
    throw ParseError(source, 0, std::string("missing array \"") + field + "\"");
  }
  std::vector<std::size_t> out;
  for (const json& v : j[field]) {
    if (!v.is_number_unsigned()) {
      throw ParseError(source, 0,
                       std::string("\"") + field + "\" must hold non-negative integers");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitComma(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(Trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string FormatDouble(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("cannot serialize a non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string TopologyName(TopologyKind kind) {
  return kind == TopologyKind::kTensorTrain ? "tt" : "btree";
}

TopologyKind ParseTopology(const std::string& name) {
  if (name == "tt") return TopologyKind::kTensorTrain;
  if (name == "btree") return TopologyKind::kBalancedBinaryTree;
  throw InvalidArgument("unknown topology \"" + name + "\" (expected tt or btree)");
}

std::string ModelToJson(const TensorNetworkModel& model, const FeatureMaps& maps) {
  const TnTopology& topo = model.topology();
  if (maps.size() != topo.n) throw InvalidArgument("feature maps must cover n features");
  for (std::size_t i = 0; i < topo.n; ++i) {
    if (maps[i].dim() != topo.phys_dims[i]) {
      throw DimensionMismatch(i, topo.phys_dims[i], maps[i].dim());
    }
  }
  std::string out = "{\n";
  out += "  \"version\": " + std::to_string(kFormatVersion) + ",\n";
  out += "  \"topology\": \"" + TopologyName(topo.kind) + "\",\n";
  out += "  \"n\": " + std::to_string(topo.n) + ",\n";
  out += "  \"phys_dims\": ";
  AppendList(out, topo.phys_dims);
  out += ",\n  \"bond_dims\": ";
  AppendList(out, topo.bond_dims);
  out += ",\n  \"feature_maps\": [";
  for (std::size_t i = 0; i < maps.size(); ++i) {
    out += i > 0 ? ", " : "";
    out += MapToJson(maps[i]);
  }
  out += "],\n  \"cores\": [\n";
  const auto& cores = model.cores();
  for (std::size_t c = 0; c < cores.size(); ++c) {
    out += "    {\"shape\": ";
    AppendList(out, cores[c].shape());
    out += ", \"data\": [";
    const auto data = cores[c].data();
    for (std::size_t f = 0; f < data.size(); ++f) {
      if (f > 0) out += ", ";
      out += FormatDouble(data[f]);
    }
    out += "]}";
    out += c + 1 < cores.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

ModelFile ModelFromJson(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, 0, e.what());
  }
  if (!j.is_object()) throw ParseError(source, 0, "model must be a JSON object");
  if (!j.contains("version") || j["version"] != kFormatVersion) {
    throw ParseError(source, 0, "unsupported or missing \"version\" (expected 1)");
  }
  if (!j.contains("topology") || !j["topology"].is_string()) {
    throw ParseError(source, 0, "missing string \"topology\"");
  }
  if (!j.contains("n") || !j["n"].is_number_unsigned()) {
    throw ParseError(source, 0, "missing integer \"n\"");
  }
  try {
    TnTopology topo;
    topo.kind = ParseTopology(j["topology"].get<std::string>());
    topo.n = j["n"].get<std::size_t>();
    topo.phys_dims = SizeList(j, "phys_dims", source);
    topo.bond_dims = SizeList(j, "bond_dims", source);
    topo.Validate();
    if (!j.contains("cores") || !j["cores"].is_array()) {
      throw ParseError(source, 0, "missing array \"cores\"");
    }
    std::vector<DenseTensor> cores;
    for (const json& c : j["cores"]) {
      if (!c.is_object()) throw ParseError(source, 0, "core must be an object");
      std::vector<std::size_t> shape = SizeList(c, "shape", source);
      if (!c.contains("data") || !c["data"].is_array()) {
        throw ParseError(source, 0, "core missing array \"data\"");
      }
      std::vector<double> data;
      data.reserve(c["data"].size());
      for (const json& v : c["data"]) {
        if (!v.is_number()) throw ParseError(source, 0, "core data must be numbers");
        data.push_back(v.get<double>());
      }
      cores.emplace_back(std::move(shape), std::move(data));
    }
    FeatureMaps maps;
    if (j.contains("feature_maps")) {
      if (!j["feature_maps"].is_array()) {
        throw ParseError(source, 0, "\"feature_maps\" must be an array");
      }
      for (const json& m : j["feature_maps"]) maps.push_back(MapFromJson(m, source));
      if (maps.size() != topo.n) {
        throw ParseError(source, 0, "\"feature_maps\" must have n entries");
      }
    } else {
      for (std::size_t d : topo.phys_dims) {
        maps.push_back(d == 2 ? LiftSpec::Binary()
                              : LiftSpec::Polynomial(static_cast<int>(d) - 1));
      }
    }
    for (std::size_t i = 0; i < topo.n; ++i) {
      if (maps[i].dim() != topo.phys_dims[i]) {
        throw ParseError(source, 0,
                         "feature map " + std::to_string(i + 1) +
                             " dimension disagrees with phys_dims");
      }
    }
    return {TensorNetworkModel(std::move(topo), std::move(cores)), std::move(maps)};
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(source, 0, e.what());
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return buf.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("cannot write " + path);
}

void WriteModel(const std::string& path, const TensorNetworkModel& model,
                const FeatureMaps& maps) {
  WriteFile(path, ModelToJson(model, maps));
}

ModelFile ReadModel(const std::string& path) {
  return ModelFromJson(ReadFile(path), path);
}

std::vector<std::vector<double>> ParseInstances(std::istream& in,
                                                const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Trim(line).empty()) break;
  }
  if (Trim(line).empty()) throw ParseError(source, line_no, "missing header row");
  const auto header = SplitComma(line);
  width = header.size();
  for (std::size_t i = 0; i < width; ++i) {
    if (header[i] != "f" + std::to_string(i + 1)) {
      throw ParseError(source, line_no,
                       "header column " + std::to_string(i + 1) + " must be f" +
                           std::to_string(i + 1));
    }
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto cells = SplitComma(line);
    if (cells.size() != width) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(width) + " values, got " +
                           std::to_string(cells.size()));
    }
    std::vector<double> row;
    for (const std::string& cell : cells) {
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size() || errno == ERANGE ||
          !std::isfinite(v)) {
        throw ParseError(source, line_no, "invalid number \"" + cell + "\"");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<double>> ReadInstances(const std::string& path) {
  std::istringstream in(ReadFile(path));
  return ParseInstances(in, path);
}

void WriteInstances(std::ostream& out,
                    const std::vector<std::vector<double>>& instances) {
  const std::size_t n = instances.empty() ? 0 : instances[0].size();
  for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << 'f' << i + 1;
  out << '\n';
  for (const auto& row : instances) {
    if (row.size() != n) throw InvalidArgument("instances differ in width");
    for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << FormatDouble(row[i]);
    out << '\n';
  }
}

void WriteAttributionHeader(std::ostream& out) {
  out << "instance_id,order,subset,value,flag\n";
}

void WriteAttributionRows(std::ostream& out, const InstanceAttributions& rows) {
  for (const AttributionEntry& e : rows.set.entries) {
    out << rows.instance_id << ',' << rows.set.order << ',';
    for (std::size_t i = 0; i < e.subset.size(); ++i) {
      out << (i ? ";" : "") << e.subset[i] + 1;
    }
    out << ',' << FormatDouble(e.value) << ','
        << (e.ill_conditioned ? "ill_conditioned" : "") << '\n';
  }
}

nlohmann::json FitConfigToJson(const FitConfig& c) {
  return {{"version", kFormatVersion},
          {"topology", TopologyName(c.topology)},
          {"bond_dim", c.bond_dim},
          {"neighborhood_samples", c.neighborhood_samples},
          {"structured_probes", c.structured_probes},
          {"sigma", c.sigma},
          {"feature_std", c.feature_std},
          {"structured_weight", c.structured_weight},
          {"neighborhood_weight", c.neighborhood_weight},
          {"max_sweeps", c.max_sweeps},
          {"tolerance", c.tolerance},
          {"seed", c.seed}};
}

FitConfig FitConfigFromJson(const nlohmann::json& j, const std::string& source) {
  if (!j.is_object()) throw ParseError(source, 0, "fit config must be a JSON object");
  FitConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "version") {
        if (value != kFormatVersion) throw ParseError(source, 0, "unsupported version");
      } else if (key == "topology") {
        c.topology = ParseTopology(value.get<std::string>());
      } else if (key == "bond_dim") {
        c.bond_dim = value.get<std::size_t>();
      } else if (key == "neighborhood_samples") {
        c.neighborhood_samples = value.get<std::size_t>();
      } else if (key == "structured_probes") {
        c.structured_probes = value.get<bool>();
      } else if (key == "sigma") {
        c.sigma = value.get<double>();
      } else if (key == "feature_std") {
        c.feature_std = value.get<double>();
      } else if (key == "structured_weight") {
        c.structured_weight = value.get<double>();
      } else if (key == "neighborhood_weight") {
        c.neighborhood_weight = value.get<double>();
      } else if (key == "max_sweeps") {
        c.max_sweeps = value.get<std::size_t>();
      } else if (key == "tolerance") {
        c.tolerance = value.get<double>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else {
        throw ParseError(source, 0, "unknown field \"" + key + "\"");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(source, 0, e.what());
  }
  try {
    c.Validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(source, 0, e.what());
  }
  return c;
}

nlohmann::json QualityToJson(const QualityMetrics& q) {
  json j = {{"order", q.order}, {"count", q.count}, {"cosine", q.cosine},
            {"mse", q.mse}};
  j["r2"] = q.r2 ? json(*q.r2) : json(nullptr);
  return j;
}

nlohmann::json FitReportToJson(const FitReport& r) {
  json quality = json::array();
  for (const QualityMetrics& q : r.quality) quality.push_back(QualityToJson(q));
  return {{"version", kFormatVersion},
          {"train_r2", r.train_r2},
          {"train_mse_history", r.train_mse_history},
          {"train_r2_history", r.train_r2_history},
          {"sweeps", r.sweeps},
          {"converged", r.converged},
          {"tikhonov_fallbacks", r.tikhonov_fallbacks},
          {"training_rows", r.training_rows},
          {"teacher_evaluations", r.teacher_evaluations},
          {"wall_seconds", r.wall_seconds},
          {"quality", quality}};
}

}  // namespace tnshap
