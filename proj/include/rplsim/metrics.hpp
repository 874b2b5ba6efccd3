#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rplsim/config.hpp"
#include "rplsim/stats.hpp"
#include "rplsim/trace.hpp"

namespace rplsim {

struct RoundMetrics {
  int round = 0;

  std::int64_t data_sent = 0;
  std::int64_t data_delivered = 0;
  double pdr = 0.0;
  std::map<std::string, std::int64_t> drops_by_reason;

  double e2e_ms = 0.0;     // over delivered packets only
  double mean_hops = 0.0;  // links traversed by delivered packets

  std::int64_t ctrl_sent = 0;
  std::int64_t ctrl_received = 0;
  std::map<std::string, std::int64_t> ctrl_sent_by_kind;
  std::int64_t replays = 0;
  std::int64_t security_drops = 0;

  double energy_tx_mj = 0.0;
  double energy_rx_mj = 0.0;
  double energy_cpu_mj = 0.0;
  double energy_idle_mj = 0.0;
  double energy_total_mj = 0.0;
  double power_per_delivered_mj = 0.0;

  std::int64_t parent_changes = 0;
  double attack_launch_s = -1.0;
  double first_reparent_after_launch_s = -1.0;  // victim leaving adversary

  std::map<NodeId, NodeId> modal_parent;        // whole round
  std::map<NodeId, NodeId> final_modal_parent;  // last five minutes
  int adversary_children_final = 0;
};

// delivered/sent; empty when the trace has no sends at all.
std::optional<double> compute_pdr(std::int64_t sent, std::int64_t delivered);

RoundMetrics compute_round_metrics(const Trace& trace,
                                   const ScenarioConfig& cfg, int round);

// Whole-trace invariants. Each violation names the offending event index.
std::vector<std::string> check_trace(const Trace& trace,
                                     const ScenarioConfig& cfg);

struct ExperimentResult {
  std::string name;
  std::vector<RoundMetrics> rounds;

  std::vector<double> values(const std::string& metric) const;
  Ci95 aggregate(const std::string& metric) const;

  // Metrics exposed to aggregation/CSV, in a fixed order.
  static const std::vector<std::string>& metric_names();
  static double metric_value(const RoundMetrics& m, const std::string& name);
};

}  // namespace rplsim
