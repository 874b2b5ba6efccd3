#include "rplsim/metrics.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace rplsim {
namespace {

using PacketKey = std::pair<NodeId, std::uint32_t>;  // (origin, seq)

// Most frequent parent per node over a snapshot window; ties resolve to the
// lowest parent id so the result is stable across runs.
std::map<NodeId, NodeId> modal_parents(const std::vector<DodagSnapshot>& snaps,
                                       SimTime from_us) {
  std::map<NodeId, std::map<NodeId, int>> counts;
  for (const auto& s : snaps) {
    if (s.t_us < from_us) continue;
    for (const auto& [node, parent] : s.parent) counts[node][parent]++;
  }
  std::map<NodeId, NodeId> modal;
  for (const auto& [node, by_parent] : counts) {
    NodeId best = kInvalidNode;
    int best_n = -1;
    for (const auto& [parent, n] : by_parent) {
      if (n > best_n) {  // map iterates parents ascending: ties keep lowest id
        best_n = n;
        best = parent;
      }
    }
    modal[node] = best;
  }
  return modal;
}

}  // namespace

std::optional<double> compute_pdr(std::int64_t sent, std::int64_t delivered) {
  if (sent <= 0) return std::nullopt;
  return static_cast<double>(delivered) / static_cast<double>(sent);
}

RoundMetrics compute_round_metrics(const Trace& trace,
                                   const ScenarioConfig& cfg, int round) {
  RoundMetrics m;
  m.round = round;

  std::map<PacketKey, SimTime> send_time;
  std::map<PacketKey, int> forwards;
  double e2e_sum_ms = 0.0;
  std::int64_t hops_sum = 0;

  for (const auto& ev : trace.events) {
    switch (ev.kind) {
      case TraceKind::DataSend:
        m.data_sent++;
        send_time[{ev.origin, ev.seq}] = ev.t_us;
        break;
      case TraceKind::DataForward:
        forwards[{ev.origin, ev.seq}]++;
        break;
      case TraceKind::DataDeliver: {
        m.data_delivered++;
        PacketKey key{ev.origin, ev.seq};
        auto it = send_time.find(key);
        if (it != send_time.end()) {
          e2e_sum_ms += static_cast<double>(ev.t_us - it->second) / 1000.0;
        }
        hops_sum += forwards[key] + 1;
        break;
      }
      case TraceKind::DataDrop:
        m.drops_by_reason[to_string(ev.reason)]++;
        break;
      case TraceKind::CtrlSend:
        m.ctrl_sent++;
        m.ctrl_sent_by_kind[to_string(ev.msg)]++;
        break;
      case TraceKind::CtrlRecv:
        m.ctrl_received++;
        break;
      case TraceKind::SecurityDrop:
        m.security_drops++;
        break;
      case TraceKind::ParentChange:
        m.parent_changes++;
        break;
      case TraceKind::Replay:
        m.replays++;
        break;
      case TraceKind::AttackLaunch:
        break;
    }
  }

  m.pdr = compute_pdr(m.data_sent, m.data_delivered).value_or(0.0);
  if (m.data_delivered > 0) {
    m.e2e_ms = e2e_sum_ms / static_cast<double>(m.data_delivered);
    m.mean_hops =
        static_cast<double>(hops_sum) / static_cast<double>(m.data_delivered);
  }

  for (const auto& [node, ledger] : trace.energy) {
    (void)node;
    m.energy_tx_mj += ledger.tx_mj;
    m.energy_rx_mj += ledger.rx_mj;
    m.energy_cpu_mj += ledger.cpu_mj;
    m.energy_idle_mj += ledger.idle_mj;
  }
  m.energy_total_mj =
      m.energy_tx_mj + m.energy_rx_mj + m.energy_cpu_mj + m.energy_idle_mj;
  if (m.data_delivered > 0) {
    m.power_per_delivered_mj =
        m.energy_total_mj / static_cast<double>(m.data_delivered);
  }

  if (trace.attack_launch_us >= 0) {
    m.attack_launch_s = static_cast<double>(trace.attack_launch_us) / 1e6;
    // First time any node that was parented to the adversary switches away
    // after the attack goes live.
    std::map<NodeId, NodeId> current_parent;
    bool found = false;
    for (const auto& ev : trace.events) {
      if (ev.kind != TraceKind::ParentChange) continue;
      NodeId prev = kInvalidNode;
      auto it = current_parent.find(ev.node);
      if (it != current_parent.end()) prev = it->second;
      if (!found && ev.t_us >= trace.attack_launch_us &&
          prev == cfg.adversary.id && ev.peer != cfg.adversary.id) {
        m.first_reparent_after_launch_s =
            static_cast<double>(ev.t_us - trace.attack_launch_us) / 1e6;
        found = true;
      }
      current_parent[ev.node] = ev.peer;
    }
  }

  m.modal_parent = modal_parents(trace.snapshots, 0);
  SimTime final_window = cfg.round_duration - us_from_s(300);
  if (final_window < 0) final_window = 0;
  m.final_modal_parent = modal_parents(trace.snapshots, final_window);
  for (const auto& [node, parent] : m.final_modal_parent) {
    (void)node;
    if (parent == cfg.adversary.id) m.adversary_children_final++;
  }

  return m;
}

std::vector<std::string> check_trace(const Trace& trace,
                                     const ScenarioConfig& cfg) {
  std::vector<std::string> violations;
  auto fail = [&violations](std::size_t idx, const std::string& what) {
    std::ostringstream os;
    os << what << " (event " << idx << ")";
    violations.push_back(os.str());
  };

  struct PacketState {
    int sends = 0;
    int terminals = 0;
    std::set<NodeId> touched;  // origin + every forwarder
    std::size_t first_event = 0;
  };
  std::map<PacketKey, PacketState> packets;

  // (receiver, sender, msg kind) -> last accepted secure counter. Stale or
  // duplicate acceptance is only ruled out by the replay-protected mode;
  // the plain preinstalled mode knowingly re-accepts replayed frames.
  std::map<std::tuple<NodeId, NodeId, MsgKind>, std::uint32_t> last_counter;
  bool rx_monotone = cfg.mode == SecurityMode::PreinstalledRp;

  // sender -> last emitted secure counter; the stack itself must never
  // reuse one, in any secured mode.
  std::map<NodeId, std::uint32_t> last_sent_counter;

  bool external = cfg.adversary.placement == AdversaryPlacement::External;

  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const auto& ev = trace.events[i];
    PacketKey key{ev.origin, ev.seq};
    switch (ev.kind) {
      case TraceKind::DataSend: {
        auto& st = packets[key];
        st.sends++;
        if (st.sends > 1) {
          fail(i, "flow: duplicate send for origin=" +
                      std::to_string(ev.origin) +
                      " seq=" + std::to_string(ev.seq));
        }
        if (!st.touched.insert(ev.node).second) {
          fail(i, "loop: origin repeated for origin=" +
                      std::to_string(ev.origin) +
                      " seq=" + std::to_string(ev.seq));
        }
        st.first_event = i;
        break;
      }
      case TraceKind::DataForward: {
        auto& st = packets[key];
        if (st.sends == 0) {
          fail(i, "flow: forward before send for origin=" +
                      std::to_string(ev.origin) +
                      " seq=" + std::to_string(ev.seq));
        }
        if (st.terminals > 0) {
          fail(i, "flow: forward after terminal for origin=" +
                      std::to_string(ev.origin) +
                      " seq=" + std::to_string(ev.seq));
        }
        if (!st.touched.insert(ev.node).second) {
          fail(i, "loop: node " + std::to_string(ev.node) +
                      " handled origin=" + std::to_string(ev.origin) +
                      " seq=" + std::to_string(ev.seq) + " twice");
        }
        break;
      }
      case TraceKind::DataDeliver:
      case TraceKind::DataDrop: {
        auto& st = packets[key];
        if (st.sends == 0) {
          fail(i, "flow: terminal before send for origin=" +
                      std::to_string(ev.origin) +
                      " seq=" + std::to_string(ev.seq));
        }
        st.terminals++;
        if (st.terminals > 1) {
          fail(i, "flow: multiple terminals for origin=" +
                      std::to_string(ev.origin) +
                      " seq=" + std::to_string(ev.seq));
        }
        break;
      }
      case TraceKind::CtrlSend: {
        if (ev.secure) {
          auto it = last_sent_counter.find(ev.node);
          if (it != last_sent_counter.end() && ev.seq <= it->second) {
            fail(i, "counter: node " + std::to_string(ev.node) +
                        " emitted counter " + std::to_string(ev.seq) +
                        " after " + std::to_string(it->second));
          }
          last_sent_counter[ev.node] = ev.seq;
        }
        break;
      }
      case TraceKind::CtrlRecv: {
        if (ev.secure && rx_monotone) {
          auto k = std::make_tuple(ev.node, ev.peer, ev.msg);
          auto it = last_counter.find(k);
          if (it != last_counter.end() && ev.seq <= it->second) {
            fail(i, "counter: node " + std::to_string(ev.node) +
                        " accepted counter " + std::to_string(ev.seq) +
                        " from " + std::to_string(ev.peer) + " kind " +
                        to_string(ev.msg) + " after " +
                        std::to_string(it->second));
          }
          last_counter[k] = ev.seq;
        }
        if (external && ev.peer == cfg.adversary.id) {
          fail(i, "isolation: node " + std::to_string(ev.node) +
                      " accepted control from external adversary");
        }
        break;
      }
      case TraceKind::ParentChange: {
        if (external && ev.peer == cfg.adversary.id) {
          fail(i, "isolation: node " + std::to_string(ev.node) +
                      " adopted external adversary as parent");
        }
        break;
      }
      default:
        break;
    }
  }

  for (const auto& [key, st] : packets) {
    if (st.sends > 0 && st.terminals == 0) {
      fail(st.first_event, "flow: packet origin=" + std::to_string(key.first) +
                               " seq=" + std::to_string(key.second) +
                               " still in flight at end of round");
    }
  }

  if (external) {
    for (std::size_t si = 0; si < trace.snapshots.size(); ++si) {
      for (const auto& [node, parent] : trace.snapshots[si].parent) {
        if (parent == cfg.adversary.id) {
          std::ostringstream os;
          os << "isolation: snapshot " << si << " shows node " << node
             << " parented to external adversary (event 0)";
          violations.push_back(os.str());
        }
      }
    }
  }

  return violations;
}

std::vector<double> ExperimentResult::values(const std::string& metric) const {
  std::vector<double> out;
  out.reserve(rounds.size());
  for (const auto& r : rounds) out.push_back(metric_value(r, metric));
  return out;
}

Ci95 ExperimentResult::aggregate(const std::string& metric) const {
  return confidence_interval_95(values(metric));
}

const std::vector<std::string>& ExperimentResult::metric_names() {
  static const std::vector<std::string> names = {
      "pdr",
      "e2e_ms",
      "mean_hops",
      "data_sent",
      "data_delivered",
      "ctrl_sent",
      "ctrl_received",
      "replays",
      "security_drops",
      "parent_changes",
      "energy_total_mj",
      "power_per_delivered_mj",
      "attack_launch_s",
      "first_reparent_after_launch_s",
      "adversary_children_final",
  };
  return names;
}

double ExperimentResult::metric_value(const RoundMetrics& m,
                                      const std::string& name) {
  if (name == "pdr") return m.pdr;
  if (name == "e2e_ms") return m.e2e_ms;
  if (name == "mean_hops") return m.mean_hops;
  if (name == "data_sent") return static_cast<double>(m.data_sent);
  if (name == "data_delivered") return static_cast<double>(m.data_delivered);
  if (name == "ctrl_sent") return static_cast<double>(m.ctrl_sent);
  if (name == "ctrl_received") return static_cast<double>(m.ctrl_received);
  if (name == "replays") return static_cast<double>(m.replays);
  if (name == "security_drops") return static_cast<double>(m.security_drops);
  if (name == "parent_changes") return static_cast<double>(m.parent_changes);
  if (name == "energy_total_mj") return m.energy_total_mj;
  if (name == "power_per_delivered_mj") return m.power_per_delivered_mj;
  if (name == "attack_launch_s") return m.attack_launch_s;
  if (name == "first_reparent_after_launch_s")
    return m.first_reparent_after_launch_s;
  if (name == "adversary_children_final")
    return static_cast<double>(m.adversary_children_final);
  throw std::invalid_argument("unknown metric: " + name);
}

}  // namespace rplsim
