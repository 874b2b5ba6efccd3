#include "rplsim/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <queue>
#include <sstream>

#include "json.hpp"
#include "rplsim/rng.hpp"

namespace rplsim {

SecurityMode mode_from_string(const std::string& s) {
  if (s == "um") return SecurityMode::Unsecured;
  if (s == "psm") return SecurityMode::Preinstalled;
  if (s == "psmrp") return SecurityMode::PreinstalledRp;
  throw std::runtime_error("unknown security mode: " + s);
}

AttackKind attack_from_string(const std::string& s) {
  if (s == "none") return AttackKind::None;
  if (s == "blackhole") return AttackKind::Blackhole;
  if (s == "sf" || s == "selective-forward") return AttackKind::SelectiveForward;
  if (s == "neighbor" || s == "neighbor-replay") return AttackKind::NeighborReplay;
  throw std::runtime_error("unknown attack: " + s);
}

AdversaryPlacement placement_from_string(const std::string& s) {
  if (s == "internal" || s == "insider") return AdversaryPlacement::Insider;
  if (s == "external") return AdversaryPlacement::External;
  throw std::runtime_error("unknown adversary placement: " + s);
}


namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("parse error in " + path + ": " + e.what());
  }
  return j;
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

json topology_to_json(const Topology& t) {
  json j;
  j["area"] = {t.area_width, t.area_height};
  j["tx_range"] = t.tx_range;
  json pos = json::object();
  for (const auto& [id, p] : t.positions) {
    pos[std::to_string(id)] = {p.x, p.y};
  }
  j["positions"] = pos;
  return j;
}

bool connected_without(const Topology& t, NodeId skip) {
  std::map<NodeId, bool> seen;
  std::queue<NodeId> q;
  NodeId start = kInvalidNode;
  for (const auto& [id, _] : t.positions) {
    if (id != skip) {
      start = id;
      break;
    }
  }
  if (start == kInvalidNode) return false;
  q.push(start);
  seen[start] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (const auto& [v, _] : t.positions) {
      if (v == skip || seen.count(v) || !t.in_range(u, v)) continue;
      seen[v] = true;
      ++count;
      q.push(v);
    }
  }
  std::size_t expected = t.positions.size() - (skip != kInvalidNode ? 1 : 0);
  return count == expected;
}

Topology topology_from_json(const json& j) {
  Topology t;
  if (j.contains("area")) {
    t.area_width = j["area"][0].get<double>();
    t.area_height = j["area"][1].get<double>();
  }
  t.tx_range = j.value("tx_range", t.tx_range);
  if (!j.contains("positions")) {
    throw std::runtime_error("topology missing positions");
  }
  for (const auto& [key, val] : j["positions"].items()) {
    NodeId id = static_cast<NodeId>(std::stoul(key));
    if (id == kInvalidNode) throw std::runtime_error("node id 0 is reserved");
    t.positions[id] = Position{val[0].get<double>(), val[1].get<double>()};
  }
  return t;
}

}  // namespace

Topology load_topology(const std::string& path) {
  return topology_from_json(read_json_file(path));
}

void save_topology(const Topology& topo, const std::string& path) {
  write_json_file(topology_to_json(topo), path);
}

ScenarioConfig load_scenario(const std::string& path) {
  json j = read_json_file(path);
  ScenarioConfig cfg;
  cfg.name = j.value("name", std::filesystem::path(path).stem().string());
  cfg.mode = mode_from_string(j.value("mode", "um"));
  cfg.seed = j.value("seed", cfg.seed);
  cfg.rounds = j.value("rounds", cfg.rounds);
  if (j.contains("round_duration_s")) {
    cfg.round_duration = us_from_s(j["round_duration_s"].get<std::int64_t>());
  }
  cfg.loss_prob = j.value("loss_prob", cfg.loss_prob);
  cfg.sink = j.value("sink", cfg.sink);
  cfg.key_hex = j.value("key_hex", cfg.key_hex);

  if (j.contains("adversary")) {
    const json& a = j["adversary"];
    cfg.adversary.id = a.value("id", cfg.adversary.id);
    cfg.adversary.attack = attack_from_string(a.value("attack", "none"));
    cfg.adversary.placement =
        placement_from_string(a.value("placement", "internal"));
    if (a.contains("launch_after_join_s")) {
      cfg.adversary.launch_after_join =
          us_from_s(a["launch_after_join_s"].get<std::int64_t>());
    }
    if (a.contains("join_fallback_s")) {
      cfg.adversary.join_fallback =
          us_from_s(a["join_fallback_s"].get<std::int64_t>());
    }
    if (a.contains("external_dis_interval_s")) {
      cfg.adversary.external_dis_interval =
          us_from_s(a["external_dis_interval_s"].get<std::int64_t>());
    }
    cfg.adversary.blackhole_advertises =
        a.value("blackhole_advertises", cfg.adversary.blackhole_advertises);
  }

  if (j.contains("senders")) {
    for (const auto& v : j["senders"]) {
      cfg.senders.insert(v.get<NodeId>());
    }
  }

  if (!j.contains("topology")) {
    throw std::runtime_error(path + ": scenario missing topology");
  }
  if (j["topology"].is_string()) {
    auto dir = std::filesystem::path(path).parent_path();
    cfg.topology =
        load_topology((dir / j["topology"].get<std::string>()).string());
  } else {
    cfg.topology = topology_from_json(j["topology"]);
  }

  if (j.contains("trickle")) {
    const json& t = j["trickle"];
    if (t.contains("i_min_s")) {
      cfg.trickle.i_min = us_from_s(t["i_min_s"].get<std::int64_t>());
    }
    cfg.trickle.doublings = t.value("doublings", cfg.trickle.doublings);
    cfg.trickle.redundancy_k = t.value("redundancy_k", cfg.trickle.redundancy_k);
  }
  if (j.contains("timeouts")) {
    const json& t = j["timeouts"];
    auto get_s = [&t](const char* key, SimTime cur) {
      return t.contains(key) ? us_from_s(t[key].get<std::int64_t>()) : cur;
    };
    cfg.timeouts.tick = get_s("tick_s", cfg.timeouts.tick);
    cfg.timeouts.dead_parent = get_s("dead_parent_s", cfg.timeouts.dead_parent);
    cfg.timeouts.dao_interval = get_s("dao_interval_s", cfg.timeouts.dao_interval);
    cfg.timeouts.dao_ack_timeout =
        get_s("dao_ack_timeout_s", cfg.timeouts.dao_ack_timeout);
    cfg.timeouts.dao_max_tx = t.value("dao_max_tx", cfg.timeouts.dao_max_tx);
    cfg.timeouts.dao_retry_backoff =
        get_s("dao_retry_backoff_s", cfg.timeouts.dao_retry_backoff);
    cfg.timeouts.parent_blacklist =
        get_s("parent_blacklist_s", cfg.timeouts.parent_blacklist);
    cfg.timeouts.cc_timeout = get_s("cc_timeout_s", cfg.timeouts.cc_timeout);
    cfg.timeouts.cc_max_reissues =
        t.value("cc_max_reissues", cfg.timeouts.cc_max_reissues);
    cfg.timeouts.dis_delay = get_s("dis_delay_s", cfg.timeouts.dis_delay);
    cfg.timeouts.dis_interval = get_s("dis_interval_s", cfg.timeouts.dis_interval);
  }
  if (j.contains("energy")) {
    const json& e = j["energy"];
    cfg.energy.tx_mj_per_byte = e.value("tx_mj_per_byte", cfg.energy.tx_mj_per_byte);
    cfg.energy.rx_mj_per_byte = e.value("rx_mj_per_byte", cfg.energy.rx_mj_per_byte);
    cfg.energy.crypto_mj_per_op =
        e.value("crypto_mj_per_op", cfg.energy.crypto_mj_per_op);
    cfg.energy.idle_mj_per_ms = e.value("idle_mj_per_ms", cfg.energy.idle_mj_per_ms);
    cfg.energy.detached_idle_mj_per_ms =
        e.value("detached_idle_mj_per_ms", cfg.energy.detached_idle_mj_per_ms);
  }
  if (j.contains("app")) {
    const json& a = j["app"];
    if (a.contains("start_s")) cfg.app.start = us_from_s(a["start_s"].get<std::int64_t>());
    if (a.contains("period_s")) cfg.app.period = us_from_s(a["period_s"].get<std::int64_t>());
    cfg.app.packets_per_round =
        a.value("packets_per_round", cfg.app.packets_per_round);
    cfg.app.payload_bytes = a.value("payload_bytes", cfg.app.payload_bytes);
  }
  if (j.contains("sizes")) {
    const json& s = j["sizes"];
    cfg.sizes.dis = s.value("dis", cfg.sizes.dis);
    cfg.sizes.dio = s.value("dio", cfg.sizes.dio);
    cfg.sizes.dao = s.value("dao", cfg.sizes.dao);
    cfg.sizes.dao_ack = s.value("dao_ack", cfg.sizes.dao_ack);
    cfg.sizes.cc = s.value("cc", cfg.sizes.cc);
    cfg.sizes.data = s.value("data", cfg.sizes.data);
  }
  if (cfg.rounds < 1) throw std::runtime_error("rounds must be >= 1");
  if (cfg.topology.positions.count(cfg.sink) == 0) {
    throw std::runtime_error("sink is not in the topology");
  }
  return cfg;
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
  json j;
  j["name"] = cfg.name;
  j["mode"] = to_string(cfg.mode);
  j["seed"] = cfg.seed;
  j["rounds"] = cfg.rounds;
  j["round_duration_s"] = cfg.round_duration / 1000000;
  j["loss_prob"] = cfg.loss_prob;
  j["sink"] = cfg.sink;
  j["key_hex"] = cfg.key_hex;
  j["adversary"] = {
      {"id", cfg.adversary.id},
      {"attack", to_string(cfg.adversary.attack)},
      {"placement", to_string(cfg.adversary.placement)},
      {"launch_after_join_s", cfg.adversary.launch_after_join / 1000000},
      {"join_fallback_s", cfg.adversary.join_fallback / 1000000},
      {"external_dis_interval_s", cfg.adversary.external_dis_interval / 1000000},
      {"blackhole_advertises", cfg.adversary.blackhole_advertises},
  };
  j["topology"] = topology_to_json(cfg.topology);
  j["trickle"] = {
      {"i_min_s", cfg.trickle.i_min / 1000000},
      {"doublings", cfg.trickle.doublings},
      {"redundancy_k", cfg.trickle.redundancy_k},
  };
  j["timeouts"] = {
      {"tick_s", cfg.timeouts.tick / 1000000},
      {"dead_parent_s", cfg.timeouts.dead_parent / 1000000},
      {"dao_interval_s", cfg.timeouts.dao_interval / 1000000},
      {"dao_ack_timeout_s", cfg.timeouts.dao_ack_timeout / 1000000},
      {"dao_max_tx", cfg.timeouts.dao_max_tx},
      {"dao_retry_backoff_s", cfg.timeouts.dao_retry_backoff / 1000000},
      {"parent_blacklist_s", cfg.timeouts.parent_blacklist / 1000000},
      {"cc_timeout_s", cfg.timeouts.cc_timeout / 1000000},
      {"cc_max_reissues", cfg.timeouts.cc_max_reissues},
      {"dis_delay_s", cfg.timeouts.dis_delay / 1000000},
      {"dis_interval_s", cfg.timeouts.dis_interval / 1000000},
  };
  j["energy"] = {
      {"tx_mj_per_byte", cfg.energy.tx_mj_per_byte},
      {"rx_mj_per_byte", cfg.energy.rx_mj_per_byte},
      {"crypto_mj_per_op", cfg.energy.crypto_mj_per_op},
      {"idle_mj_per_ms", cfg.energy.idle_mj_per_ms},
      {"detached_idle_mj_per_ms", cfg.energy.detached_idle_mj_per_ms},
  };
  j["app"] = {
      {"start_s", cfg.app.start / 1000000},
      {"period_s", cfg.app.period / 1000000},
      {"packets_per_round", cfg.app.packets_per_round},
      {"payload_bytes", cfg.app.payload_bytes},
  };
  write_json_file(j, path);
}

Topology generate_topology(std::uint64_t seed, const TopologyGenParams& p) {
  if (p.n_nodes < 2) {
    throw ConstraintUnsatisfiable("need at least a sink and one node");
  }
  if (p.tx_range <= 0 || p.area_width <= 0 || p.area_height <= 0) {
    throw ConstraintUnsatisfiable("degenerate area or radio range");
  }
  Rng rng = derive_rng(seed, 0, kInvalidNode, "topology");

  std::string last_failure = "no attempt made";
  for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
    Topology t;
    t.area_width = p.area_width;
    t.area_height = p.area_height;
    t.tx_range = p.tx_range;
    for (NodeId id = 1; id <= static_cast<NodeId>(p.n_nodes); ++id) {
      t.positions[id] = Position{rng.next_real(0.0, p.area_width),
                                 rng.next_real(0.0, p.area_height)};
    }
    if (p.require_connected && !connected_without(t, kInvalidNode)) {
      last_failure = "graph not connected";
      continue;
    }
    if (p.require_adversary_near_sink &&
        !t.in_range(p.sink, p.adversary)) {
      last_failure = "adversary out of sink range";
      continue;
    }
    if (p.require_shadow_geometry) {
      bool found = false;
      for (const auto& [id, _] : t.positions) {
        if (id == p.sink || id == p.adversary) continue;
        if (t.in_range(id, p.adversary) && !t.in_range(id, p.sink)) {
          found = true;
          break;
        }
      }
      if (!found) {
        last_failure = "no node hears the adversary without hearing the sink";
        continue;
      }
    }
    if (p.require_redundant_bridge && !connected_without(t, p.adversary)) {
      last_failure = "graph disconnects when the adversary is removed";
      continue;
    }
    return t;
  }
  std::ostringstream msg;
  msg << "no placement satisfied all constraints after " << p.max_attempts
      << " attempts (last failure: " << last_failure
      << "; n=" << p.n_nodes << ", area=" << p.area_width << "x"
      << p.area_height << ", range=" << p.tx_range << ")";
  throw ConstraintUnsatisfiable(msg.str());
}

StructureAnalysis analyze_structure(const Topology& topo, NodeId sink) {
  StructureAnalysis a;
  for (const auto& [id, _] : topo.positions) {
    a.rank[id] = kInfiniteRank;
    a.parent[id] = kInvalidNode;
  }
  if (topo.positions.count(sink) == 0) return a;
  a.rank[sink] = kRootRank;
  // Bellman-Ford style relaxation to a fixpoint: each node takes the
  // neighbor with minimum rank (lowest id on ties) as parent.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [id, _] : topo.positions) {
      if (id == sink) continue;
      Rank best_rank = kInfiniteRank;
      NodeId best = kInvalidNode;
      for (const auto& [nb, _2] : topo.positions) {
        if (nb == id || !topo.in_range(id, nb)) continue;
        Rank r = a.rank[nb];
        if (r == kInfiniteRank) continue;
        if (r < best_rank || (r == best_rank && nb < best)) {
          best_rank = r;
          best = nb;
        }
      }
      if (best == kInvalidNode) continue;
      Rank mine = static_cast<Rank>(
          std::min<std::uint32_t>(best_rank + kMinHopRankIncrease,
                                  kInfiniteRank));
      if (mine < a.rank[id] ||
          (mine == a.rank[id] && best != a.parent[id])) {
        if (mine < a.rank[id]) changed = true;
        a.rank[id] = mine;
        a.parent[id] = best;
      }
    }
  }
  a.connected = true;
  for (const auto& [id, r] : a.rank) {
    if (r == kInfiniteRank) a.connected = false;
  }
  return a;
}

const std::set<NodeId>& canonical_targeted_nodes() {
  static const std::set<NodeId> t = {2, 5, 6, 8, 12, 15, 18, 21, 28};
  return t;
}

std::vector<std::string> validate_canonical(const ScenarioConfig& cfg,
                                            const std::set<NodeId>& targeted) {
  std::vector<std::string> out;
  const Topology& t = cfg.topology;
  const NodeId sink = cfg.sink;
  const NodeId adv = cfg.adversary.id;

  for (const auto& [id, p] : t.positions) {
    if (p.x < 0 || p.x > t.area_width || p.y < 0 || p.y > t.area_height) {
      out.push_back("node " + std::to_string(id) + " outside area bounds");
    }
  }
  if (t.positions.count(sink) == 0) out.push_back("sink missing");
  if (t.positions.count(adv) == 0) out.push_back("adversary missing");
  if (!out.empty()) return out;

  StructureAnalysis a = analyze_structure(t, sink);
  if (!a.connected) out.push_back("graph not connected");
  if (!t.in_range(sink, adv)) out.push_back("adversary out of sink range");
  if (a.parent[adv] != sink) out.push_back("adversary does not parent to sink");

  // The shadow node: hears the adversary, cannot hear the sink. It is the
  // pivot of every attack scenario.
  NodeId shadow = kInvalidNode;
  for (const auto& [id, _] : t.positions) {
    if (id == sink || id == adv) continue;
    if (t.in_range(id, adv) && !t.in_range(id, sink) &&
        a.parent[id] == adv) {
      shadow = id;
      break;
    }
  }
  if (shadow == kInvalidNode) {
    out.push_back("no node parents to the adversary from outside sink range");
    return out;
  }

  // The shadow node must keep a fallback parent at the same depth that
  // does not route through the adversary.
  bool has_bridge = false;
  for (const auto& [id, _] : t.positions) {
    if (id == adv || id == shadow || !t.in_range(shadow, id)) continue;
    if (a.rank[id] == a.rank[adv] && a.parent[id] == sink) {
      has_bridge = true;
      break;
    }
  }
  if (!has_bridge) {
    out.push_back("shadow node has no same-depth fallback to the sink");
  }

  // Subtree under the shadow node == targeted set minus the bridge
  // member(s) that are targeted for being on the recovery path.
  std::set<NodeId> subtree;
  subtree.insert(shadow);
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& [id, par] : a.parent) {
      if (subtree.count(id)) continue;
      if (subtree.count(par)) {
        subtree.insert(id);
        grew = true;
      }
    }
  }
  for (NodeId v : subtree) {
    if (!targeted.count(v)) {
      out.push_back("subtree node " + std::to_string(v) +
                    " missing from targeted set");
    }
  }
  for (NodeId v : targeted) {
    if (!subtree.count(v)) {
      // Allowed only for bridge nodes adjacent to the shadow node.
      if (!t.in_range(v, shadow)) {
        out.push_back("targeted node " + std::to_string(v) +
                      " neither in subtree nor adjacent to shadow node");
      }
    }
  }
  if (!connected_without(t, adv)) {
    out.push_back("graph disconnects when the adversary is removed");
  }
  return out;
}

}  // namespace rplsim
