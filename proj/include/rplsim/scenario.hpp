#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rplsim/config.hpp"

namespace rplsim {

// Thrown by generate_topology when rejection sampling gives up.
struct ConstraintUnsatisfiable : std::runtime_error {
  explicit ConstraintUnsatisfiable(const std::string& what)
      : std::runtime_error(what) {}
};

// Canonical string forms accepted by scenario files and CLI flags.
SecurityMode mode_from_string(const std::string& s);
AttackKind attack_from_string(const std::string& s);
AdversaryPlacement placement_from_string(const std::string& s);

// Structured-file round trip. Topology may be inline or referenced by a
// path relative to the scenario file.
ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);

Topology load_topology(const std::string& path);
void save_topology(const Topology& topo, const std::string& path);

struct TopologyGenParams {
  int n_nodes = 28;
  double area_width = 290.0;
  double area_height = 310.0;
  double tx_range = 66.0;
  NodeId sink = 1;
  NodeId adversary = 3;
  int max_attempts = 20000;

  // Constraints applied during rejection sampling.
  bool require_connected = true;
  bool require_adversary_near_sink = true;   // adversary within sink range
  bool require_shadow_geometry = true;       // some node hears the adversary
                                             // but not the sink
  bool require_redundant_bridge = true;      // graph survives removing the
                                             // adversary
};

// Rejection-samples uniform placements until every enabled constraint
// holds. Deterministic for a given seed. Throws ConstraintUnsatisfiable
// with diagnostics after max_attempts.
Topology generate_topology(std::uint64_t seed, const TopologyGenParams& p);

// Shortest-hop structural analysis of a topology (the objective-function
// fixpoint): per-node depth rank and preferred parent.
struct StructureAnalysis {
  std::map<NodeId, Rank> rank;
  std::map<NodeId, NodeId> parent;
  bool connected = false;
};
StructureAnalysis analyze_structure(const Topology& topo, NodeId sink);

// Checks the hand-placed evaluation topology against every structural
// property the experiments rely on. Returns human-readable violations;
// empty means valid.
std::vector<std::string> validate_canonical(const ScenarioConfig& cfg,
                                            const std::set<NodeId>& targeted);

// The targeted set used by the canonical evaluation scenarios.
const std::set<NodeId>& canonical_targeted_nodes();

}  // namespace rplsim
