// Command-line front end: run one scenario, run the full evaluation
// matrix, validate scenario files, generate topologies, or re-check a
// dumped trace against the protocol invariants.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rplsim/metrics.hpp"
#include "rplsim/runner.hpp"
#include "rplsim/scenario.hpp"
#include "rplsim/trace_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rplsim;

namespace {

std::string default_out_dir() {
  if (const char* env = std::getenv("RPLSIM_OUT_DIR")) return env;
  return "results";
}

// Cells of the evaluation matrix, in presentation order.
const std::vector<std::string> kExperiments = {"um-i", "psm-i", "psmrp-i",
                                               "psm-e"};
const std::vector<std::string> kScenarios = {"no-attack", "blackhole",
                                             "selective-forward",
                                             "neighbor-replay"};

std::string csv_num(double v) { return json(v).dump(); }

void write_rounds_csv(const ExperimentResult& result, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "scenario,round,metric,value\n";
  for (const auto& r : result.rounds) {
    for (const auto& name : ExperimentResult::metric_names()) {
      out << result.name << ',' << r.round << ',' << name << ','
          << csv_num(ExperimentResult::metric_value(r, name)) << '\n';
    }
    for (const auto& [reason, n] : r.drops_by_reason) {
      out << result.name << ',' << r.round << ",drops." << reason << ',' << n
          << '\n';
    }
    for (const auto& [kind, n] : r.ctrl_sent_by_kind) {
      out << result.name << ',' << r.round << ",ctrl_sent." << kind << ','
          << n << '\n';
    }
  }
}

json modal_to_json(const std::map<NodeId, NodeId>& modal) {
  json arr = json::array();
  for (const auto& [node, parent] : modal) {
    arr.push_back(json::array({node, parent}));
  }
  return arr;
}

json result_to_json(const ScenarioConfig& cfg, const ExperimentResult& result) {
  json j;
  j["name"] = result.name;
  j["mode"] = to_string(cfg.mode);
  j["attack"] = to_string(cfg.adversary.attack);
  j["placement"] = to_string(cfg.adversary.placement);
  j["seed"] = cfg.seed;
  j["rounds"] = result.rounds.size();
  json metrics = json::object();
  for (const auto& name : ExperimentResult::metric_names()) {
    Ci95 ci = result.aggregate(name);
    json entry;
    entry["mean"] = ci.mean;
    entry["half_width"] = ci.half_width;
    entry["values"] = result.values(name);
    metrics[name] = entry;
  }
  j["metrics"] = metrics;
  if (!result.rounds.empty()) {
    j["modal_parent_r0"] = modal_to_json(result.rounds.front().modal_parent);
    j["final_modal_parent_r0"] =
        modal_to_json(result.rounds.front().final_modal_parent);
  }
  return j;
}

void write_dodag_dot(const ScenarioConfig& cfg,
                     const std::map<NodeId, NodeId>& modal,
                     const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "digraph dodag {\n  rankdir=BT;\n  node [shape=circle];\n";
  out << "  " << cfg.sink << " [shape=doublecircle];\n";
  if (cfg.adversary.attack != AttackKind::None) {
    out << "  " << cfg.adversary.id
        << " [style=filled, fillcolor=indianred];\n";
  }
  for (const auto& [node, parent] : modal) {
    if (parent == kInvalidNode) {
      out << "  " << node << " [style=dashed];\n";
    } else {
      out << "  " << node << " -> " << parent << ";\n";
    }
  }
  out << "}\n";
}

struct RunOutput {
  ExperimentResult result;
  std::vector<std::string> violations;
};

// Runs a scenario, writing per-round artifacts under out_dir/<name>/.
RunOutput run_one(const ScenarioConfig& cfg, const fs::path& out_dir,
                  bool dump_traces, bool check) {
  fs::path dir = out_dir / cfg.name;
  fs::create_directories(dir);

  RunOutput out;
  out.result = run_experiment(cfg, [&](int round, const Trace& trace,
                                       const RoundMetrics&) {
    if (dump_traces) {
      fs::path tp = dir / ("trace-r" + std::to_string(round) + ".jsonl");
      write_trace_jsonl(trace, cfg, tp.string());
    }
    if (check) {
      for (auto& v : check_trace(trace, cfg)) {
        out.violations.push_back(cfg.name + " round " +
                                 std::to_string(round) + ": " + v);
      }
    }
  });

  write_rounds_csv(out.result, dir / "rounds.csv");
  {
    std::ofstream f(dir / "summary.json");
    f << result_to_json(cfg, out.result).dump(2) << '\n';
  }
  return out;
}

void apply_overrides(ScenarioConfig& cfg, const std::string& mode,
                     const std::string& attack, const std::string& placement,
                     int adversary, std::int64_t seed, int rounds,
                     int duration_s) {
  if (!mode.empty()) cfg.mode = mode_from_string(mode);
  if (!attack.empty()) cfg.adversary.attack = attack_from_string(attack);
  if (!placement.empty())
    cfg.adversary.placement = placement_from_string(placement);
  if (adversary > 0) cfg.adversary.id = static_cast<NodeId>(adversary);
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (rounds > 0) cfg.rounds = rounds;
  if (duration_s > 0) cfg.round_duration = us_from_s(duration_s);
}

int cmd_run(const std::string& scenario_path, const std::string& out_root,
            bool dump_traces, bool check, const std::string& mode,
            const std::string& attack, const std::string& placement,
            int adversary, std::int64_t seed, int rounds, int duration_s) {
  ScenarioConfig cfg = load_scenario(scenario_path);
  apply_overrides(cfg, mode, attack, placement, adversary, seed, rounds,
                  duration_s);

  RunOutput out = run_one(cfg, out_root, dump_traces, check);

  Ci95 pdr = out.result.aggregate("pdr");
  Ci95 e2e = out.result.aggregate("e2e_ms");
  Ci95 ctrl = out.result.aggregate("ctrl_sent");
  Ci95 power = out.result.aggregate("power_per_delivered_mj");
  std::cout << cfg.name << ": pdr=" << pdr.mean << "±" << pdr.half_width
            << " e2e_ms=" << e2e.mean << "±" << e2e.half_width
            << " ctrl_sent=" << ctrl.mean
            << " power_mj_per_pkt=" << power.mean << '\n';
  std::cout << "results written to " << (fs::path(out_root) / cfg.name).string()
            << '\n';

  if (!out.violations.empty()) {
    std::cerr << out.violations.size() << " invariant violation(s):\n";
    for (const auto& v : out.violations) std::cerr << "  " << v << '\n';
    return 2;
  }
  return 0;
}

int cmd_matrix(const std::string& scenarios_dir, const std::string& out_root,
               bool dump_traces, bool check, int rounds) {
  fs::path out_dir(out_root);
  fs::create_directories(out_dir);

  json summary;
  summary["cells"] = json::object();
  std::vector<std::string> all_violations;
  std::ofstream combined(out_dir / "matrix.csv");
  combined << "scenario,round,metric,value\n";

  for (const auto& exp : kExperiments) {
    for (const auto& scen : kScenarios) {
      std::string cell = exp + "-" + scen;
      fs::path spath = fs::path(scenarios_dir) / (cell + ".json");
      if (!fs::exists(spath)) {
        std::cerr << "missing scenario file: " << spath.string() << '\n';
        return 1;
      }
      ScenarioConfig cfg = load_scenario(spath.string());
      if (rounds > 0) cfg.rounds = rounds;

      RunOutput out = run_one(cfg, out_dir, dump_traces, check);
      for (auto& v : out.violations) all_violations.push_back(std::move(v));

      summary["cells"][cell] = result_to_json(cfg, out.result);
      {
        std::ifstream rc(out_dir / cfg.name / "rounds.csv");
        std::string line;
        std::getline(rc, line);  // skip header
        while (std::getline(rc, line)) combined << line << '\n';
      }
      if (!out.result.rounds.empty()) {
        write_dodag_dot(cfg, out.result.rounds.front().final_modal_parent,
                        out_dir / ("dodag-" + cell + ".dot"));
      }

      Ci95 pdr = out.result.aggregate("pdr");
      std::cout << cell << ": pdr=" << pdr.mean << "±" << pdr.half_width
                << '\n';
    }
  }

  {
    std::ofstream f(out_dir / "summary.json");
    f << summary.dump(2) << '\n';
  }
  std::cout << "matrix written to " << out_dir.string() << '\n';

  if (!all_violations.empty()) {
    std::cerr << all_violations.size() << " invariant violation(s):\n";
    for (const auto& v : all_violations) std::cerr << "  " << v << '\n';
    return 2;
  }
  return 0;
}

int cmd_check_trace(const std::string& path) {
  LoadedTrace loaded = read_trace_jsonl(path);
  auto violations = check_trace(loaded.trace, loaded.cfg);
  if (violations.empty()) {
    std::cout << path << ": ok (" << loaded.trace.events.size()
              << " events)\n";
    return 0;
  }
  std::cerr << path << ": " << violations.size() << " violation(s):\n";
  for (const auto& v : violations) std::cerr << "  " << v << '\n';
  return 2;
}

int cmd_gen_topology(std::uint64_t seed, int nodes, const std::string& out) {
  TopologyGenParams params;
  params.n_nodes = nodes;
  Topology topo = generate_topology(seed, params);
  save_topology(topo, out);
  StructureAnalysis sa = analyze_structure(topo, params.sink);
  std::cout << "generated " << topo.positions.size() << " nodes (seed "
            << seed << "), connected=" << (sa.connected ? "yes" : "no")
            << ", written to " << out << '\n';
  return 0;
}

int cmd_validate(const std::string& scenario_path) {
  ScenarioConfig cfg = load_scenario(scenario_path);
  auto violations = validate_canonical(cfg, canonical_targeted_nodes());
  if (violations.empty()) {
    std::cout << scenario_path << ": ok\n";
    return 0;
  }
  std::cerr << scenario_path << ": " << violations.size() << " problem(s):\n";
  for (const auto& v : violations) std::cerr << "  " << v << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator for secured low-power mesh routing"};
  app.require_subcommand(1);

  // run
  std::string scenario_path, out_root = default_out_dir();
  std::string mode, attack, placement;
  int adversary = 0, rounds = 0, duration_s = 0;
  std::int64_t seed = -1;
  bool dump_traces = false, check = false;

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", scenario_path, "Scenario file (JSON)")
      ->required();
  run->add_option("--out", out_root, "Output directory root");
  run->add_option("--seed", seed, "Override the base seed");
  run->add_option("--rounds", rounds, "Override the round count");
  run->add_option("--duration", duration_s, "Override round duration (s)");
  run->add_option("--mode", mode, "Override security mode (um|psm|psmrp)");
  run->add_option("--attack", attack,
                  "Override attack (none|blackhole|selective-forward|"
                  "neighbor-replay)");
  run->add_option("--placement", placement,
                  "Override adversary placement (internal|external)");
  run->add_option("--adversary", adversary, "Override adversary node id");
  run->add_flag("--trace", dump_traces, "Dump per-round traces (JSONL)");
  run->add_flag("--check", check, "Check protocol invariants per round");

  // matrix
  std::string scenarios_dir = "scenarios";
  std::string m_out = default_out_dir();
  int m_rounds = 0;
  bool m_trace = false, m_check = false;
  auto* matrix =
      app.add_subcommand("matrix", "Run the full 4x4 evaluation matrix");
  matrix->add_option("--scenarios-dir", scenarios_dir,
                     "Directory with the 16 scenario files");
  matrix->add_option("--out", m_out, "Output directory root");
  matrix->add_option("--rounds", m_rounds, "Override round count per cell");
  matrix->add_flag("--trace", m_trace, "Dump per-round traces (JSONL)");
  matrix->add_flag("--check", m_check, "Check protocol invariants per round");

  // check-trace
  std::string trace_path;
  auto* check_cmd =
      app.add_subcommand("check-trace", "Re-check a dumped trace");
  check_cmd->add_option("trace", trace_path, "Trace file (JSONL)")->required();

  // gen-topology
  std::uint64_t gen_seed = 1;
  int gen_nodes = 28;
  std::string gen_out = "topology.json";
  auto* gen = app.add_subcommand("gen-topology",
                                 "Generate a random constrained topology");
  gen->add_option("--seed", gen_seed, "Placement seed");
  gen->add_option("--nodes", gen_nodes, "Node count");
  gen->add_option("--out", gen_out, "Output file");

  // validate
  std::string val_path;
  auto* val = app.add_subcommand(
      "validate", "Check a scenario's topology structural properties");
  val->add_option("scenario", val_path, "Scenario file (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(scenario_path, out_root, dump_traces, check, mode,
                     attack, placement, adversary, seed, rounds, duration_s);
    }
    if (matrix->parsed()) {
      return cmd_matrix(scenarios_dir, m_out, m_trace, m_check, m_rounds);
    }
    if (check_cmd->parsed()) return cmd_check_trace(trace_path);
    if (gen->parsed()) return cmd_gen_topology(gen_seed, gen_nodes, gen_out);
    if (val->parsed()) return cmd_validate(val_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
