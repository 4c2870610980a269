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

#include "cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tnshap/attribute.h"
#include "tnshap/errors.h"
#include "tnshap/fit.h"
#include "tnshap/io.h"
#include "tnshap/log.h"
#include "tnshap/oracle.h"
#include "tnshap/parallel.h"
#include "tnshap/teachers.h"

namespace tnshap::cli {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kInstanceStream = 0xD1B54A32D192ED03ULL;
constexpr std::size_t kVerifyMaxFeatures = 16;

class VerifyFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string out;
  std::string config;
  std::string manifest;
};

// Collects the run record; written once at the end of every run.
class Manifest {
 public:
  explicit Manifest(std::string command) { doc_["command"] = std::move(command); }

  json& doc() { return doc_; }

  void Input(const std::string& path) { doc_["inputs"].push_back(path); }
  void Output(const std::string& path) { doc_["outputs"].push_back(path); }
  void Forwards(const std::string& key, std::uint64_t count) {
    doc_["forward_counts"][key] = count;
  }

  void BeginPhase() { phase_start_ = Clock::now(); }
  void EndPhase(const std::string& name) {
    doc_["phase_seconds"][name] =
        std::chrono::duration<double>(Clock::now() - phase_start_).count();
  }

 private:
  json doc_ = json::object();
  Clock::time_point phase_start_ = Clock::now();
};

std::vector<std::vector<double>> UniformInstances(std::size_t count, std::size_t n,
                                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ kInstanceStream);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<std::vector<double>> rows(count, std::vector<double>(n));
  for (auto& row : rows) {
    for (double& v : row) v = uniform(rng);
  }
  return rows;
}

std::vector<std::vector<double>> GaussianInstances(std::size_t count, std::size_t n,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ kInstanceStream);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> rows(count, std::vector<double>(n));
  for (auto& row : rows) {
    for (double& v : row) v = normal(rng);
  }
  return rows;
}

void CheckWidth(const std::vector<std::vector<double>>& rows, std::size_t n,
                const std::string& source) {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != n) {
      throw ParseError(source, r + 2,
                       "instance has " + std::to_string(rows[r].size()) +
                           " features, model has " + std::to_string(n));
    }
  }
}

// Writes `text` to `path`, or to `out` when the path is empty.
void Emit(const std::string& path, const std::string& text, std::ostream& out,
          Manifest& manifest) {
  if (path.empty()) {
    out << text;
    return;
  }
  WriteFile(path, text);
  manifest.Output(path);
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double Mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double SampleStd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = Mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Fills options that were not given on the command line from a flat JSON
// object keyed by long option names.
void ApplyConfig(const std::string& path, CLI::App& app, CLI::App* sub) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path, 0, e.what());
  }
  if (!j.is_object()) throw ParseError(path, 0, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "config") throw ParseError(path, 0, "config files cannot nest");
    CLI::Option* opt = nullptr;
    for (CLI::App* a : {sub, &app}) {
      if (a == nullptr) continue;
      try {
        opt = a->get_option("--" + key);
        break;
      } catch (const CLI::OptionNotFound&) {
      }
    }
    if (opt == nullptr) throw ParseError(path, 0, "unknown option \"" + key + "\"");
    if (opt->count() > 0) continue;
    std::vector<std::string> inputs;
    auto scalar = [&](const json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
      if (v.is_number_integer()) return v.dump();
      if (v.is_number()) return FormatDouble(v.get<double>());
      throw ParseError(path, 0, "option \"" + key + "\" has an unsupported value");
    };
    if (value.is_array()) {
      for (const json& v : value) inputs.push_back(scalar(v));
    } else {
      inputs.push_back(scalar(value));
    }
    try {
      opt->add_result(inputs);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ParseError(path, 0, "option \"" + key + "\": " + e.what());
    }
  }
}

void Require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

// ---- gen ----

struct GenArgs {
  std::string kind;
  std::size_t n = 0;
  std::size_t rank = 0;
  std::string lift = "binary";
  std::size_t instances = 0;
  std::string instances_out;
};

void RunGen(const GenArgs& a, const Globals& g, Manifest& m, std::ostream& out) {
  Require(a.kind == "cp" || a.kind == "tree", "--kind must be cp or tree");
  Require(a.n >= 1, "--n must be >= 1");
  Require(a.rank >= 1, "--rank must be >= 1");
  const FeatureMaps maps(a.n, ParseLiftSpec(a.lift));
  m.BeginPhase();
  const TensorNetworkModel model =
      a.kind == "cp" ? GenCpTeacher(a.n, a.rank, g.seed, maps).ToTensorTrain()
                     : GenTreeTeacher(a.n, a.rank, g.seed, maps);
  m.EndPhase("generate");
  m.doc()["cut_rank"] = CutRank(model.topology());
  m.BeginPhase();
  Emit(g.out, ModelToJson(model, maps), out, m);
  if (a.instances > 0) {
    Require(!a.instances_out.empty(), "--instances needs --instances-out");
    std::ostringstream csv;
    WriteInstances(csv, UniformInstances(a.instances, a.n, g.seed));
    WriteFile(a.instances_out, csv.str());
    m.Output(a.instances_out);
  }
  m.EndPhase("write");
}

// ---- explain ----

struct ExplainArgs {
  std::string model;
  std::string instances;
  std::size_t k = 1;
  std::string mode = "auto";
};

void RunExplain(const ExplainArgs& a, const Globals& g, Manifest& m,
                std::ostream& out) {
  Require(!a.model.empty(), "--model is required");
  Require(!a.instances.empty(), "--instances is required");
  const ProbeMode mode = ParseMode(a.mode);
  m.BeginPhase();
  const ModelFile mf = ReadModel(a.model);
  m.Input(a.model);
  const auto rows = ReadInstances(a.instances);
  m.Input(a.instances);
  CheckWidth(rows, mf.model.n(), a.instances);
  Require(a.k >= 1 && a.k <= mf.model.n(), "--k must lie in [1, n]");
  m.EndPhase("load");
  m.BeginPhase();
  const auto results = ExplainBatch(mf.model, mf.maps, rows, a.k, mode);
  m.EndPhase("attribute");
  std::ostringstream csv;
  WriteAttributionHeader(csv);
  std::uint64_t forwards = 0;
  std::size_t flagged = 0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    if (!results[r].result) {
      throw InvalidArgument("instance " + std::to_string(r + 1) + ": " +
                            results[r].error);
    }
    forwards += results[r].result->forwards_used;
    for (const auto& e : results[r].result->entries) flagged += e.ill_conditioned;
    WriteAttributionRows(csv, {r + 1, *results[r].result});
  }
  m.Forwards("attribution", forwards);
  m.doc()["resolved_mode"] = ModeName(ResolveMode(mode, a.k));
  m.doc()["ill_conditioned_entries"] = flagged;
  m.BeginPhase();
  Emit(g.out, csv.str(), out, m);
  m.EndPhase("write");
}

// ---- verify ----

struct VerifyArgs {
  std::string model;
  std::string instances;
  std::size_t max_order = 3;
  std::string mode = "auto";
  double tolerance = 1e-7;
};

void RunVerify(const VerifyArgs& a, const Globals& g, Manifest& m,
               std::ostream& out) {
  Require(!a.model.empty(), "--model is required");
  Require(!a.instances.empty(), "--instances is required");
  Require(a.max_order >= 1, "--max-order must be >= 1");
  const ProbeMode mode = ParseMode(a.mode);
  m.BeginPhase();
  const ModelFile mf = ReadModel(a.model);
  m.Input(a.model);
  const auto rows = ReadInstances(a.instances);
  m.Input(a.instances);
  const std::size_t n = mf.model.n();
  CheckWidth(rows, n, a.instances);
  if (n > kVerifyMaxFeatures) {
    throw SizeLimitExceeded("verify", n, kVerifyMaxFeatures);
  }
  m.EndPhase("load");
  const std::size_t top = std::min(a.max_order, n);
  std::vector<double> max_diff(top + 1, 0.0);
  std::uint64_t probe_forwards = 0;
  m.BeginPhase();
  std::vector<CoalitionTable> tables;
  for (const auto& x : rows) tables.push_back(EnumerateGame(mf.model, mf.maps, x));
  m.EndPhase("oracle");
  m.Forwards("oracle", static_cast<std::uint64_t>(rows.size()) << n);
  m.BeginPhase();
  for (std::size_t k = 1; k <= top; ++k) {
    const ProbePlan plan = ProbePlan::Chebyshev(n - k + 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const AttributionSet mine =
          Explain(mf.model, mf.maps, rows[r], k, mode, &plan);
      const AttributionSet exact = ExactSii(tables[r], k);
      probe_forwards += mine.forwards_used;
      for (std::size_t e = 0; e < exact.entries.size(); ++e) {
        const double d = std::abs(mine.entries[e].value - exact.entries[e].value);
        max_diff[k] = std::max(max_diff[k], std::isnan(d) ? INFINITY : d);
      }
    }
  }
  m.EndPhase("attribute");
  m.Forwards("attribution", probe_forwards);
  json report = {{"version", 1}, {"n", n}, {"instances", rows.size()},
                 {"tolerance", a.tolerance}, {"orders", json::array()}};
  bool pass = true;
  for (std::size_t k = 1; k <= top; ++k) {
    const bool ok = max_diff[k] < a.tolerance;
    pass = pass && ok;
    report["orders"].push_back(
        {{"order", k}, {"max_abs_diff", max_diff[k]}, {"pass", ok}});
  }
  report["pass"] = pass;
  m.doc()["pass"] = pass;
  Emit(g.out, report.dump(2) + "\n", out, m);
  if (!pass) throw VerifyFailed("attributions differ from enumeration");
}

// ---- bench ----

struct BenchArgs {
  std::vector<std::size_t> dims;
  std::size_t rank = 16;
  std::size_t repeats = 3;
  std::string kind = "cp";
  std::string lift = "binary";
};

void RunBench(const BenchArgs& a, const Globals& g, Manifest& m, std::ostream& out) {
  Require(!a.dims.empty(), "--dims is required");
  Require(std::is_sorted(a.dims.begin(), a.dims.end()) && a.dims.front() >= 1,
          "--dims must be ascending and positive");
  Require(a.rank >= 1 && a.repeats >= 1, "--rank and --repeats must be >= 1");
  Require(a.kind == "cp" || a.kind == "tree", "--kind must be cp or tree");
  const LiftSpec lift = ParseLiftSpec(a.lift);
  json rows = json::array();
  double attribute_seconds = 0.0;
  std::uint64_t total_forwards = 0;
  for (std::size_t n : a.dims) {
    const FeatureMaps maps(n, lift);
    const TensorNetworkModel model =
        a.kind == "cp" ? GenCpTeacher(n, a.rank, g.seed, maps).ToTensorTrain()
                       : GenTreeTeacher(n, a.rank, g.seed, maps);
    const auto x = UniformInstances(1, n, g.seed)[0];
    const ProbePlan plan = ProbePlan::Chebyshev(n);
    std::vector<double> seconds;
    std::uint64_t forwards = 0;
    for (std::size_t r = 0; r < a.repeats; ++r) {
      const auto start = Clock::now();
      const AttributionSet set =
          Explain(model, maps, x, 1, ProbeMode::kInclusionExclusion, &plan);
      seconds.push_back(std::chrono::duration<double>(Clock::now() - start).count());
      forwards = set.forwards_used;
    }
    attribute_seconds += std::accumulate(seconds.begin(), seconds.end(), 0.0);
    total_forwards += forwards * a.repeats;
    rows.push_back({{"n", n},
                    {"rank", a.rank},
                    {"cut_rank", CutRank(model.topology())},
                    {"forwards", forwards},
                    {"repeats", a.repeats},
                    {"mean_seconds", Mean(seconds)},
                    {"median_seconds", Median(seconds)},
                    {"std_seconds", SampleStd(seconds)}});
    TNSHAP_LOG(kInfo) << "bench n=" << n << " median " << Median(seconds) << " s";
  }
  m.doc()["phase_seconds"]["attribute"] = attribute_seconds;
  m.Forwards("attribution", total_forwards);
  json report = {{"version", 1}, {"kind", a.kind}, {"rows", rows}};
  Emit(g.out, report.dump(2) + "\n", out, m);
}

// ---- fit ----

struct FitArgs {
  std::string teacher;
  std::string fit_config;
  std::string instances;   // first row is the center
  std::string test_instances;
  std::string report;
  std::vector<std::size_t> orders{1, 2, 3};
  std::string topology;
  std::size_t bond = 0;
  std::size_t samples = 0;
  double sigma = 0.0;
  std::size_t sweeps = 0;
  double tolerance = -1.0;
  bool no_structured = false;
};

FitConfig ResolveFitConfig(const FitArgs& a, const Globals& g) {
  FitConfig c;
  if (!a.fit_config.empty()) {
    json j;
    try {
      j = json::parse(ReadFile(a.fit_config));
    } catch (const json::parse_error& e) {
      throw ParseError(a.fit_config, 0, e.what());
    }
    c = FitConfigFromJson(j, a.fit_config);
  } else {
    c.seed = g.seed;
  }
  if (!a.topology.empty()) c.topology = ParseTopology(a.topology);
  if (a.bond > 0) c.bond_dim = a.bond;
  if (a.samples > 0) c.neighborhood_samples = a.samples;
  if (a.sigma > 0.0) c.sigma = a.sigma;
  if (a.sweeps > 0) c.max_sweeps = a.sweeps;
  if (a.tolerance >= 0.0) c.tolerance = a.tolerance;
  if (a.no_structured) c.structured_probes = false;
  c.Validate();
  return c;
}

void RunFit(const FitArgs& a, const Globals& g, Manifest& m, std::ostream& out) {
  Require(!a.teacher.empty(), "--teacher is required");
  const FitConfig config = ResolveFitConfig(a, g);
  m.doc()["fit_config"] = FitConfigToJson(config);
  m.BeginPhase();
  const ModelFile teacher = ReadModel(a.teacher);
  m.Input(a.teacher);
  const std::size_t n = teacher.model.n();
  std::vector<double> x0;
  if (!a.instances.empty()) {
    const auto rows = ReadInstances(a.instances);
    m.Input(a.instances);
    CheckWidth(rows, n, a.instances);
    Require(!rows.empty(), "--instances holds no rows");
    x0 = rows[0];
  } else {
    x0 = UniformInstances(1, n, config.seed)[0];
  }
  std::vector<std::vector<double>> tests;
  if (!a.test_instances.empty()) {
    tests = ReadInstances(a.test_instances);
    m.Input(a.test_instances);
    CheckWidth(tests, n, a.test_instances);
  }
  m.EndPhase("load");
  m.BeginPhase();
  const LiftedFunction f = [&](std::span<const std::vector<double>> l) {
    return teacher.model.Forward(l);
  };
  const TrainingSet data = BuildTrainingSet(f, teacher.maps, x0, config);
  m.EndPhase("sample");
  m.Forwards("teacher", data.teacher_evaluations);
  m.BeginPhase();
  auto [student, report] = FitStudent(data, config);
  m.EndPhase("fit");
  if (!tests.empty()) {
    m.BeginPhase();
    report.quality = EvalQuality(student, teacher.model, teacher.maps, tests, a.orders);
    m.EndPhase("evaluate");
  }
  if (!g.out.empty()) {
    WriteModel(g.out, student, teacher.maps);
    m.Output(g.out);
  }
  json doc = FitReportToJson(report);
  doc["config"] = FitConfigToJson(config);
  const std::string text = doc.dump(2) + "\n";
  if (a.report.empty()) {
    out << text;
  } else {
    WriteFile(a.report, text);
    m.Output(a.report);
  }
}

// ---- rank-sweep ----

struct SweepArgs {
  std::string teacher;
  std::vector<std::size_t> ranks;
  std::vector<std::uint64_t> seeds;
  std::string protocol = "global";
  std::size_t samples = 0;
  std::size_t test_count = 32;
  std::size_t sweeps = 30;
  std::string topology = "btree";
};

json Aggregate(const std::vector<double>& v) {
  return {{"mean", Mean(v)}, {"std", SampleStd(v)}, {"count", v.size()}};
}

void RunRankSweep(const SweepArgs& a, const Globals& g, Manifest& m,
                  std::ostream& out) {
  Require(!a.teacher.empty(), "--teacher is required");
  Require(!a.ranks.empty(), "--ranks is required");
  Require(a.protocol == "global" || a.protocol == "local",
          "--protocol must be global or local");
  Require(a.test_count >= 1, "--test-count must be >= 1");
  const ModelFile teacher = ReadModel(a.teacher);
  m.Input(a.teacher);
  const std::size_t n = teacher.model.n();
  if (n > kMaxOracleFeatures) throw SizeLimitExceeded("rank-sweep", n, kMaxOracleFeatures);
  const std::vector<std::uint64_t> seeds =
      a.seeds.empty() ? std::vector<std::uint64_t>{g.seed} : a.seeds;
  const bool global = a.protocol == "global";
  const std::size_t orders_max = std::min<std::size_t>(3, n);
  std::vector<std::size_t> orders;
  for (std::size_t k = 1; k <= orders_max; ++k) orders.push_back(k);
  json cells = json::array();
  json summary = json::array();
  const LiftedFunction f = [&](std::span<const std::vector<double>> l) {
    return teacher.model.Forward(l);
  };
  std::uint64_t teacher_evals = 0;
  m.BeginPhase();
  for (std::size_t rank : a.ranks) {
    std::vector<double> train;
    std::vector<std::vector<double>> per_order(orders.size());
    for (std::uint64_t seed : seeds) {
      json cell = {{"rank", rank}, {"seed", seed}};
      try {
        FitConfig c;
        c.topology = ParseTopology(a.topology);
        c.bond_dim = rank;
        c.seed = seed;
        c.max_sweeps = a.sweeps;
        std::vector<double> x0;
        std::vector<std::vector<double>> tests;
        if (global) {
          // i.i.d. standard normal inputs around the origin.
          c.neighborhood_samples = a.samples > 0 ? a.samples : 2000;
          c.sigma = 1.0 / c.feature_std;
          c.structured_probes = false;
          x0.assign(n, 0.0);
          tests = GaussianInstances(a.test_count, n, seed);
        } else {
          c.neighborhood_samples = a.samples > 0 ? a.samples : 100;
          x0 = UniformInstances(1, n, seed)[0];
          std::mt19937_64 rng(seed ^ kInstanceStream);
          std::normal_distribution<double> normal(0.0, 1.0);
          tests.push_back(x0);
          for (std::size_t t = 1; t < a.test_count; ++t) {
            std::vector<double> x = x0;
            for (double& v : x) v += c.sigma * c.feature_std * normal(rng);
            tests.push_back(x);
          }
        }
        const TrainingSet data = BuildTrainingSet(f, teacher.maps, x0, c);
        teacher_evals += data.teacher_evaluations;
        auto [student, report] = FitStudent(data, c);
        report.quality = EvalQuality(student, teacher.model, teacher.maps, tests, orders);
        cell["report"] = FitReportToJson(report);
        train.push_back(report.train_r2);
        for (std::size_t o = 0; o < orders.size(); ++o) {
          if (report.quality[o].r2) per_order[o].push_back(*report.quality[o].r2);
        }
        TNSHAP_LOG(kInfo) << "rank " << rank << " seed " << seed << " train R2 "
                          << report.train_r2;
      } catch (const Error& e) {
        cell["error"] = e.what();
        TNSHAP_LOG(kError) << "rank " << rank << " seed " << seed << ": " << e.what();
      }
      cells.push_back(cell);
    }
    json row = {{"rank", rank}, {"train_r2", Aggregate(train)}};
    for (std::size_t o = 0; o < orders.size(); ++o) {
      row["order_r2"].push_back(
          {{"order", orders[o]}, {"r2", Aggregate(per_order[o])}});
    }
    summary.push_back(row);
  }
  m.EndPhase("sweep");
  m.Forwards("teacher", teacher_evals);
  json report = {{"version", 1},   {"protocol", a.protocol}, {"n", n},
                 {"cells", cells}, {"summary", summary}};
  Emit(g.out, report.dump(2) + "\n", out, m);
}

void WriteManifest(Manifest& m, const Globals& g, std::ostream& err) {
  json& doc = m.doc();
  doc["version"] = TNSHAP_VERSION;
  doc["seed"] = g.seed;
  doc["threads"] = ThreadBudget();
  const std::string text = doc.dump(2) + "\n";
  std::string path = g.manifest;
  if (path.empty() && !g.out.empty()) path = g.out + ".manifest.json";
  if (path.empty()) {
    err << doc.dump() << "\n";
  } else {
    WriteFile(path, text);
  }
}

json OptionsToJson(const CLI::App& app) {
  json j = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config" ||
        name == "manifest") {
      continue;
    }
    const auto& results = opt->results();
    if (results.empty()) {
      j[name] = opt->get_default_str();
    } else if (results.size() == 1) {
      j[name] = results[0];
    } else {
      j[name] = results;
    }
  }
  return j;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Shapley values and interaction indices on tensor networks",
               "tnshap"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (0 = all cores)")
      ->capture_default_str();
  app.add_option("--out", g.out, "primary output path (default stdout)");
  app.add_option("--config", g.config, "JSON file of option defaults");
  app.add_option("--manifest", g.manifest, "run manifest path");

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a random teacher model");
  gen_cmd->add_option("--kind", gen.kind, "cp or tree");
  gen_cmd->add_option("--n", gen.n, "number of features");
  gen_cmd->add_option("--rank", gen.rank, "CP rank or tree bond dimension");
  gen_cmd->add_option("--lift", gen.lift, "binary, poly:K or fourier:K[:OMEGA]")
      ->capture_default_str();
  gen_cmd->add_option("--instances", gen.instances, "also sample this many instances");
  gen_cmd->add_option("--instances-out", gen.instances_out, "instance CSV path");

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit a student network to a teacher");
  fit_cmd->add_option("--teacher", fit.teacher, "teacher model JSON");
  fit_cmd->add_option("--fit-config", fit.fit_config, "FitConfig JSON");
  fit_cmd->add_option("--instances", fit.instances, "CSV whose first row is the center");
  fit_cmd->add_option("--test-instances", fit.test_instances,
                      "CSV of instances for attribution quality");
  fit_cmd->add_option("--orders", fit.orders, "orders for attribution quality")
      ->capture_default_str();
  fit_cmd->add_option("--report", fit.report, "FitReport path (default stdout)");
  fit_cmd->add_option("--topology", fit.topology, "tt or btree");
  fit_cmd->add_option("--bond", fit.bond, "student bond dimension");
  fit_cmd->add_option("--samples", fit.samples, "neighborhood sample count M");
  fit_cmd->add_option("--sigma", fit.sigma, "neighborhood scale");
  fit_cmd->add_option("--sweeps", fit.sweeps, "maximum ALS sweeps");
  fit_cmd->add_option("--tolerance", fit.tolerance, "train R^2 stopping tolerance");
  fit_cmd->add_flag("--no-structured", fit.no_structured, "omit the 2n^2 probe rows");

  ExplainArgs explain;
  CLI::App* explain_cmd = app.add_subcommand("explain", "attribution CSV for instances");
  explain_cmd->add_option("--model", explain.model, "model JSON");
  explain_cmd->add_option("--instances", explain.instances, "instance CSV");
  explain_cmd->add_option("--k", explain.k, "interaction order")->capture_default_str();
  explain_cmd->add_option("--mode", explain.mode, "auto, ie or st")->capture_default_str();

  VerifyArgs verify;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "compare attributions with full enumeration");
  verify_cmd->add_option("--model", verify.model, "model JSON");
  verify_cmd->add_option("--instances", verify.instances, "instance CSV");
  verify_cmd->add_option("--max-order", verify.max_order, "highest order checked")
      ->capture_default_str();
  verify_cmd->add_option("--mode", verify.mode, "auto, ie or st")->capture_default_str();
  verify_cmd->add_option("--tolerance", verify.tolerance, "max abs difference")
      ->capture_default_str();

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "time first-order attribution");
  bench_cmd->add_option("--dims", bench.dims, "feature counts, ascending");
  bench_cmd->add_option("--rank", bench.rank, "teacher rank")->capture_default_str();
  bench_cmd->add_option("--repeats", bench.repeats, "timings per dimension")
      ->capture_default_str();
  bench_cmd->add_option("--kind", bench.kind, "cp or tree")->capture_default_str();
  bench_cmd->add_option("--lift", bench.lift, "feature map")->capture_default_str();

  SweepArgs sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("rank-sweep", "fit students of several ranks to a teacher");
  sweep_cmd->add_option("--teacher", sweep.teacher, "teacher model JSON");
  sweep_cmd->add_option("--ranks", sweep.ranks, "student bond dimensions");
  sweep_cmd->add_option("--seeds", sweep.seeds, "fit seeds (default --seed)");
  sweep_cmd->add_option("--protocol", sweep.protocol, "global or local")
      ->capture_default_str();
  sweep_cmd->add_option("--samples", sweep.samples, "training samples per fit");
  sweep_cmd->add_option("--test-count", sweep.test_count, "test instances per fit")
      ->capture_default_str();
  sweep_cmd->add_option("--sweeps", sweep.sweeps, "maximum ALS sweeps")
      ->capture_default_str();
  sweep_cmd->add_option("--topology", sweep.topology, "student topology")
      ->capture_default_str();

  std::vector<const char*> argv;
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "tnshap: " << e.what() << "\n";
    return kExitInputError;
  }
  CLI::App* sub = app.get_subcommands().front();
  Manifest manifest(sub->get_name());
  try {
    if (!g.config.empty()) {
      ApplyConfig(g.config, app, sub);
      manifest.Input(g.config);
    }
    if (g.threads > 0) SetThreadBudget(g.threads);
    json config = OptionsToJson(app);
    config.update(OptionsToJson(*sub));
    manifest.doc()["config"] = config;
    if (sub == gen_cmd) {
      RunGen(gen, g, manifest, out);
    } else if (sub == fit_cmd) {
      RunFit(fit, g, manifest, out);
    } else if (sub == explain_cmd) {
      RunExplain(explain, g, manifest, out);
    } else if (sub == verify_cmd) {
      RunVerify(verify, g, manifest, out);
    } else if (sub == bench_cmd) {
      RunBench(bench, g, manifest, out);
    } else {
      RunRankSweep(sweep, g, manifest, out);
    }
    WriteManifest(manifest, g, err);
    return kExitOk;
  } catch (const VerifyFailed& e) {
    TNSHAP_LOG(kError) << e.what();
    WriteManifest(manifest, g, err);
    return kExitVerifyFailed;
  } catch (const std::exception& e) {
    err << "tnshap: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace tnshap::cli
