#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rplsim/config.hpp"
#include "rplsim/engine.hpp"
#include "rplsim/rng.hpp"
#include "rplsim/trace.hpp"
#include "rplsim/types.hpp"

namespace rplsim {

class Node;

// One simulated round: owns the clock, the radio, every node, and the
// trace. Unit-disk radio: multicasts reach every node in range, unicasts
// reach the addressee iff in range (no overhearing); a unicast into the
// void burns transmit energy and, for data frames, records the loss.
class SimNet {
 public:
  SimNet(const ScenarioConfig& cfg, int round_index);
  ~SimNet();

  // Builds nodes, runs the round to completion. Call once.
  void run();

  // Runs only up to `until` (incremental driving for tests).
  void start();
  void run_until(SimTime until);
  void finish();

  Engine& engine() { return engine_; }
  SimTime now() const { return engine_.now(); }
  const ScenarioConfig& config() const { return cfg_; }
  int round_index() const { return round_index_; }

  Trace& trace() { return trace_; }
  Trace take_trace() { return std::move(trace_); }

  // Radio transmit. radio_dest = kInvalidNode multicasts to every node in
  // range; otherwise delivers to the addressee only, if reachable.
  void transmit(NodeId from, NodeId radio_dest, std::vector<std::uint8_t> frame);

  Rng& rng(NodeId node, const std::string& purpose);
  void charge_cpu(NodeId node);
  void record(const TraceRecord& r) { trace_.add(r); }

  // Adversary lifecycle: first route acknowledgement marks the join; the
  // behavior arms a fixed delay later (or after the fallback when the
  // device never joins, e.g. an outsider).
  void notify_adversary_joined();
  bool attack_launched() const { return attack_launched_; }

  Node& node(NodeId id);
  bool has_node(NodeId id) const { return nodes_.count(id) > 0; }
  std::vector<NodeId> node_ids() const;

 private:
  void build_nodes();
  void schedule_snapshots();
  void take_snapshot();
  void do_launch();
  void deliver(NodeId to, std::shared_ptr<const std::vector<std::uint8_t>> frame);

  const ScenarioConfig& cfg_;
  int round_index_;
  Engine engine_;
  Trace trace_;
  std::map<NodeId, std::unique_ptr<Node>> nodes_;
  std::map<std::pair<NodeId, std::string>, std::unique_ptr<Rng>> rngs_;
  bool started_ = false;
  bool finished_ = false;
  bool attack_launch_scheduled_ = false;
  bool attack_launched_ = false;
};

}  // namespace rplsim
