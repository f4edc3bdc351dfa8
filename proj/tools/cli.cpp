// Copyright 2026 The flowrt Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flowrt_cli/cli.hpp"

#include <charconv>
#include <fstream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "flowrt/analysis/affinity.hpp"
#include "flowrt/cft/parser.hpp"
#include "flowrt/cft/validate.hpp"
#include "flowrt/hostbench/bandwidth.hpp"
#include "flowrt/hostbench/sweep.hpp"
#include "flowrt/runtime/run.hpp"
#include "flowrt/topology/lint.hpp"
#include "flowrt/topology/topology.hpp"
#include "json.hpp"

namespace flowrt::cli {

std::optional<std::uint64_t> parse_size(std::string_view text) {
  std::uint64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr == first) return std::nullopt;
  const std::string_view suffix(ptr, static_cast<std::size_t>(last - ptr));
  unsigned shift = 0;
  if (suffix == "KiB") {
    shift = 10;
  } else if (suffix == "MiB") {
    shift = 20;
  } else if (suffix == "GiB") {
    shift = 30;
  } else if (!suffix.empty()) {
    return std::nullopt;
  }
  if (shift != 0 && value > (UINT64_MAX >> shift)) return std::nullopt;
  return value << shift;
}

namespace {

// Raised inside a subcommand to end it with a specific exit code.
struct Exit {
  int code;
};

[[noreturn]] void usage_error(std::ostream& err, const std::string& message) {
  err << "flowrt: " << message << '\n';
  throw Exit{kExitUsage};
}

std::string read_file(std::ostream& err, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) usage_error(err, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t size_arg(std::ostream& err, const std::string& flag, const std::string& text) {
  const auto v = parse_size(text);
  if (!v) usage_error(err, flag + ": not a size: " + text);
  return *v;
}

cft::Module load_module(std::ostream& err, const std::string& path) {
  const std::string text = read_file(err, path);
  try {
    return cft::parse_module(text);
  } catch (const cft::ParseError& e) {
    err << path << ':' << e.loc().line << ':' << e.loc().col << ": " << to_string(e.kind()) << ": " << e.detail()
        << '\n';
    throw Exit{kExitUsage};
  }
}

void print_findings(std::ostream& err, const std::string& path, const cft::ValidationReport& report) {
  for (const auto& f : report.findings) {
    err << path << ':' << f.loc.line << ':' << f.loc.col << ": " << to_string(f.severity) << ": " << f.rule << ": "
        << f.message << '\n';
  }
}

struct AnalyzeArgs {
  std::string file;
  double ratio = analysis::kDefaultRatioThreshold;
};

int do_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  const cft::Module m = load_module(err, a.file);
  const auto report = cft::validate_module(m);
  print_findings(err, a.file, report);
  if (report.has_errors()) return kExitUsage;
  out << analysis::analysis_to_json(m, analysis::analyze_module(m, a.ratio));
  return kExitOk;
}

struct RunArgs {
  std::string file;
  std::string topology;
  std::string mode = "jit";
  std::uint64_t quantum = 1000;
  std::uint64_t seed = 0;
  bool migrate = false;
  std::uint64_t epoch = runtime::MigrationPolicy{}.epoch_instructions;
  std::uint64_t hot_threshold = runtime::MigrationPolicy{}.hot_threshold;
  std::string placement;
  std::vector<std::string> files;
  std::string report = "-";
};

int do_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  const cft::Module m = load_module(err, a.file);
  std::optional<topology::Topology> topo;
  try {
    topo.emplace(topology::topology_from_json(read_file(err, a.topology)));
  } catch (const topology::TopologyError& e) {
    usage_error(err, a.topology + ": " + e.what());
  }

  runtime::RunConfig cfg;
  if (a.mode == "jit") {
    cfg.mode = runtime::CompileMode::jit;
  } else if (a.mode == "aot") {
    cfg.mode = runtime::CompileMode::aot;
  } else {
    usage_error(err, "--mode must be jit or aot");
  }
  cfg.quantum = a.quantum;
  cfg.seed = a.seed;
  if (a.migrate) {
    runtime::MigrationPolicy p;
    p.epoch_instructions = a.epoch;
    p.hot_threshold = a.hot_threshold;
    cfg.migration = p;
  }
  if (!a.placement.empty()) cfg.initial_region = a.placement;

  engine::HostEnv env;
  for (const auto& spec : a.files) {
    const auto eq = spec.find('=');
    std::int32_t fd = 0;
    if (eq == std::string::npos) usage_error(err, "--file expects FD=PATH, got " + spec);
    const auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + eq, fd);
    if (ec != std::errc() || ptr != spec.data() + eq || fd < 0) usage_error(err, "--file: bad descriptor in " + spec);
    const std::string bytes = read_file(err, spec.substr(eq + 1));
    env.files[fd] = std::vector<std::uint8_t>(bytes.begin(), bytes.end());
  }

  runtime::RunReport report;
  try {
    report = runtime::run(m, *topo, cfg, std::move(env));
  } catch (const runtime::ConfigError& e) {
    usage_error(err, e.what());
  } catch (const runtime::ScheduleError& e) {
    usage_error(err, e.what());
  }

  const std::string json = runtime::report_to_json(report);
  if (a.report == "-") {
    out << json;
  } else {
    std::ofstream f(a.report, std::ios::binary);
    if (!f) usage_error(err, "cannot write " + a.report);
    f << json;
  }
  if (!report.ok()) {
    err << "flowrt: run ended with " << report.exit_status;
    if (report.trap) err << " (" << *report.trap << ')';
    err << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

struct ChaseArgs {
  std::string min = "4KiB";
  std::string max = "64MiB";
  double factor = 2.0;
  std::string stride = "64";
  std::uint64_t seed = 0;
  std::uint64_t loads = 1 << 20;
  std::uint64_t repeats = 5;
  bool csv = false;
};

int do_chase(const ChaseArgs& a, std::ostream& out, std::ostream& err) {
  hostbench::SweepConfig cfg;
  cfg.min_bytes = size_arg(err, "--min", a.min);
  cfg.max_bytes = size_arg(err, "--max", a.max);
  cfg.stride_bytes = size_arg(err, "--stride", a.stride);
  cfg.factor = a.factor;
  cfg.seed = a.seed;
  cfg.loads = a.loads;
  cfg.repeats = a.repeats;
  if (cfg.repeats == 0) usage_error(err, "--repeats must be at least 1");
  std::vector<hostbench::BenchRow> rows;
  try {
    rows = hostbench::sweep(cfg);
  } catch (const hostbench::BadGeometry& e) {
    usage_error(err, std::string("BadGeometry: ") + e.what());
  } catch (const std::invalid_argument& e) {
    usage_error(err, e.what());
  }
  out << (a.csv ? hostbench::rows_to_csv(rows) : hostbench::rows_to_json(rows));
  return kExitOk;
}

struct BandwidthArgs {
  std::string size = "64MiB";
  std::uint64_t repeats = 5;
};

int do_bandwidth(const BandwidthArgs& a, std::ostream& out, std::ostream& err) {
  const std::uint64_t size = size_arg(err, "--size", a.size);
  if (a.repeats == 0) usage_error(err, "--repeats must be at least 1");
  hostbench::BandwidthResult r;
  try {
    r = hostbench::measure_bandwidth(size, a.repeats);
  } catch (const std::invalid_argument& e) {
    usage_error(err, e.what());
  }
  nlohmann::ordered_json j;
  j["size_bytes"] = r.size_bytes;
  j["repeats"] = r.repeats;
  j["gb_per_s"] = r.gb_per_s;
  j["checksum"] = r.checksum;
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct TopologyArgs {
  std::string file;
  bool tier_ordering = false;
  bool strict = false;
};

int do_topology(const TopologyArgs& a, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(err, a.file);
  topology::LintReport report;
  try {
    const topology::Topology t = topology::topology_from_json(text);
    report = topology::validate_topology(t, a.tier_ordering);
  } catch (const topology::TopologyError& e) {
    report.findings.push_back({std::string(to_string(e.kind())), Severity::error, e.what()});
  }
  out << report.to_json() << '\n';
  if (report.has_errors()) return kExitFailure;
  if (a.strict && !report.empty()) return kExitFailure;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"flowrt: analyze, run and benchmark programs on a modeled device topology", "flowrt"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Print affinity decisions for each spawnable function");
  analyze_cmd->add_option("program", analyze.file, "Program text (.cft)")->required();
  analyze_cmd->add_option("--ratio-threshold", analyze.ratio, "arith/mem ratio for the compute rule");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Execute a program and emit a run report");
  run_cmd->add_option("program", run.file, "Program text (.cft)")->required();
  run_cmd->add_option("--topology", run.topology, "Topology JSON")->required();
  run_cmd->add_option("--mode", run.mode, "jit or aot");
  run_cmd->add_option("--quantum", run.quantum, "Instructions per scheduling turn");
  run_cmd->add_option("--seed", run.seed, "Recorded in the report");
  run_cmd->add_flag("--migrate", run.migrate, "Enable epoch page migration");
  run_cmd->add_option("--epoch", run.epoch, "Instructions per migration epoch");
  run_cmd->add_option("--hot-threshold", run.hot_threshold, "Accesses that make a page hot");
  run_cmd->add_option("--placement", run.placement, "Initial region for linear memory");
  run_cmd->add_option("--file", run.files, "Preload a virtual file, FD=PATH")->allow_extra_args(false);
  run_cmd->add_option("--report", run.report, "Report path, or - for stdout");

  ChaseArgs chase;
  auto* chase_cmd = app.add_subcommand("bench-chase", "Pointer-chasing latency sweep on this machine");
  chase_cmd->add_option("--min", chase.min, "Smallest working set");
  chase_cmd->add_option("--max", chase.max, "Largest working set");
  chase_cmd->add_option("--factor", chase.factor, "Ladder growth factor");
  chase_cmd->add_option("--stride", chase.stride, "Bytes between chased slots");
  chase_cmd->add_option("--seed", chase.seed, "Shuffle seed");
  chase_cmd->add_option("--loads", chase.loads, "Timed loads per repeat (raised to one traversal)");
  chase_cmd->add_option("--repeats", chase.repeats, "Timed repeats");
  chase_cmd->add_flag("--csv", chase.csv, "CSV instead of JSON");

  BandwidthArgs bw;
  auto* bw_cmd = app.add_subcommand("bench-bandwidth", "Streaming-read bandwidth on this machine");
  bw_cmd->add_option("--size", bw.size, "Buffer size, at least 1MiB");
  bw_cmd->add_option("--repeats", bw.repeats, "Timed repeats");

  TopologyArgs topo;
  auto* topo_cmd = app.add_subcommand("topology-validate", "Check a topology document");
  topo_cmd->add_option("topology", topo.file, "Topology JSON")->required();
  topo_cmd->add_flag("--tier-ordering", topo.tier_ordering, "Check tiered latency and bandwidth ordering");
  topo_cmd->add_flag("--strict", topo.strict, "Fail on warnings");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("flowrt");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (analyze_cmd->parsed()) return do_analyze(analyze, out, err);
    if (run_cmd->parsed()) return do_run(run, out, err);
    if (chase_cmd->parsed()) return do_chase(chase, out, err);
    if (bw_cmd->parsed()) return do_bandwidth(bw, out, err);
    if (topo_cmd->parsed()) return do_topology(topo, out, err);
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitUsage;
}

}  // namespace flowrt::cli
