#pragma once

// Shared scaffolding for simulator tests: tiny inline topologies and
// trace-query helpers.

#include <algorithm>
#include <initializer_list>
#include <map>
#include <utility>
#include <vector>

#include "rplsim/config.hpp"
#include "rplsim/trace.hpp"

namespace rplsim::testing {

// Builds a scenario around explicit positions. Nodes default to a
// horizontal line when only x-offsets matter.
inline ScenarioConfig make_config(
    std::initializer_list<std::pair<NodeId, Position>> nodes,
    SecurityMode mode = SecurityMode::Unsecured) {
  ScenarioConfig cfg;
  cfg.name = "test";
  cfg.mode = mode;
  cfg.seed = 7;
  cfg.rounds = 1;
  cfg.round_duration = us_from_s(600);
  cfg.sink = nodes.begin()->first;
  cfg.adversary.id = 0xFFFF;  // no adversary unless a test sets one
  cfg.adversary.attack = AttackKind::None;
  cfg.topology.area_width = 1000;
  cfg.topology.area_height = 1000;
  cfg.topology.tx_range = 66.0;
  for (const auto& [id, pos] : nodes) cfg.topology.positions[id] = pos;
  return cfg;
}

// A 1-D chain: node i placed at x = (i-1)*spacing.
inline ScenarioConfig make_line(int n, double spacing = 60.0,
                                SecurityMode mode = SecurityMode::Unsecured) {
  ScenarioConfig cfg = make_config({{1, {0, 0}}}, mode);
  cfg.topology.positions.clear();
  for (int i = 1; i <= n; ++i) {
    cfg.topology.positions[static_cast<NodeId>(i)] =
        Position{(i - 1) * spacing, 0.0};
  }
  cfg.sink = 1;
  return cfg;
}

inline std::vector<TraceRecord> filter(const Trace& trace, TraceKind kind) {
  std::vector<TraceRecord> out;
  for (const auto& ev : trace.events) {
    if (ev.kind == kind) out.push_back(ev);
  }
  return out;
}

inline std::vector<TraceRecord> filter(const Trace& trace, TraceKind kind,
                                       NodeId node) {
  std::vector<TraceRecord> out;
  for (const auto& ev : trace.events) {
    if (ev.kind == kind && ev.node == node) out.push_back(ev);
  }
  return out;
}

inline long count(const Trace& trace, TraceKind kind) {
  return static_cast<long>(filter(trace, kind).size());
}

}  // namespace rplsim::testing
