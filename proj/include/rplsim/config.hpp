#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "rplsim/trickle.hpp"
#include "rplsim/types.hpp"
#include "rplsim/wire.hpp"

namespace rplsim {

struct Topology {
  double area_width = 290.0;
  double area_height = 310.0;
  double tx_range = 66.0;
  std::map<NodeId, Position> positions;

  bool in_range(NodeId a, NodeId b) const {
    auto ia = positions.find(a);
    auto ib = positions.find(b);
    if (ia == positions.end() || ib == positions.end()) return false;
    return distance(ia->second, ib->second) <= tx_range;
  }
};

struct EnergyModel {
  double tx_mj_per_byte = 6e-4;
  double rx_mj_per_byte = 4e-5;
  double crypto_mj_per_op = 2e-4;  // one seal or open attempt
  // A node synchronized to a routing graph duty-cycles its radio; a
  // detached one keeps it in continuous listen while soliciting.
  double idle_mj_per_ms = 2e-6;
  double detached_idle_mj_per_ms = 8e-6;
};

struct AppTraffic {
  SimTime start = us_from_s(180);     // first send window opens
  SimTime period = us_from_s(60);     // one packet per period per sender
  int packets_per_round = 20;
  std::size_t payload_bytes = 192;    // nominal data frame size
};

struct Timeouts {
  SimTime tick = us_from_s(10);
  SimTime dead_parent = us_from_s(720);   // silence before eviction
  SimTime dao_interval = us_from_s(180);  // periodic route refresh
  SimTime dao_ack_timeout = us_from_s(15);
  int dao_max_tx = 3;                     // transmissions before giving up
  SimTime dao_retry_backoff = us_from_s(15);  // pause after exhaustion
  SimTime parent_blacklist = us_from_s(75);   // holddown after eviction
  SimTime cc_timeout = us_from_s(10);
  int cc_max_reissues = 3;
  SimTime dis_delay = us_from_s(10);      // parentless before soliciting
  SimTime dis_interval = us_from_s(15);   // between solicitations
};

struct AdversaryConfig {
  NodeId id = 3;
  AttackKind attack = AttackKind::None;
  AdversaryPlacement placement = AdversaryPlacement::Insider;
  SimTime launch_after_join = us_from_s(120);
  SimTime join_fallback = us_from_s(120);  // treat as joined by this time
  SimTime external_dis_interval = us_from_s(5);  // outsider solicitation rate
  bool blackhole_advertises = false;       // keep beaconing after launch
};

struct ScenarioConfig {
  std::string name = "scenario";
  SecurityMode mode = SecurityMode::Unsecured;
  std::uint64_t seed = 1;
  int rounds = 10;
  SimTime round_duration = us_from_s(1500);
  SimTime snapshot_period = us_from_s(60);
  double loss_prob = 0.0;

  NodeId sink = 1;
  std::set<NodeId> senders;  // empty = every non-sink, non-external node

  Topology topology;
  WireSizes sizes;
  TrickleConfig trickle;
  EnergyModel energy;
  AppTraffic app;
  Timeouts timeouts;
  AdversaryConfig adversary;
  std::string key_hex = "000102030405060708090a0b0c0d0e0f";

  bool node_is_secured(NodeId id) const {
    if (mode == SecurityMode::Unsecured) return false;
    if (id == adversary.id &&
        adversary.placement == AdversaryPlacement::External) {
      return false;  // outsider has no key material
    }
    return true;
  }

  bool node_sends_data(NodeId id) const {
    if (id == sink) return false;
    if (id == adversary.id) return false;
    if (!senders.empty()) return senders.count(id) > 0;
    return true;
  }
};

}  // namespace rplsim
