#include "rplsim/trace_io.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace rplsim {
namespace {

using nlohmann::json;

TraceKind trace_kind_from(const std::string& s) {
  for (int k = 0; k <= static_cast<int>(TraceKind::AttackLaunch); ++k) {
    auto kind = static_cast<TraceKind>(k);
    if (s == to_string(kind)) return kind;
  }
  throw std::runtime_error("unknown trace event kind: " + s);
}

MsgKind msg_kind_from(const std::string& s) {
  for (MsgKind k : {MsgKind::Dis, MsgKind::Dio, MsgKind::Dao, MsgKind::DaoAck,
                    MsgKind::Cc, MsgKind::Data}) {
    if (s == to_string(k)) return k;
  }
  throw std::runtime_error("unknown message kind: " + s);
}

DropReason drop_reason_from(const std::string& s) {
  for (DropReason r :
       {DropReason::None, DropReason::NoRoute, DropReason::AttackerDrop,
        DropReason::SecurityReject, DropReason::QueueTimeout, DropReason::Loop,
        DropReason::RadioVoid}) {
    if (s == to_string(r)) return r;
  }
  throw std::runtime_error("unknown drop reason: " + s);
}

SecurityMode mode_from(const std::string& s) {
  for (SecurityMode m : {SecurityMode::Unsecured, SecurityMode::Preinstalled,
                         SecurityMode::PreinstalledRp}) {
    if (s == to_string(m)) return m;
  }
  throw std::runtime_error("unknown security mode: " + s);
}

AttackKind attack_from(const std::string& s) {
  for (AttackKind a : {AttackKind::None, AttackKind::Blackhole,
                       AttackKind::SelectiveForward, AttackKind::NeighborReplay}) {
    if (s == to_string(a)) return a;
  }
  throw std::runtime_error("unknown attack kind: " + s);
}

AdversaryPlacement placement_from(const std::string& s) {
  for (AdversaryPlacement p :
       {AdversaryPlacement::Insider, AdversaryPlacement::External}) {
    if (s == to_string(p)) return p;
  }
  throw std::runtime_error("unknown adversary placement: " + s);
}

}  // namespace

void write_trace_jsonl(const Trace& trace, const ScenarioConfig& cfg,
                       std::ostream& out) {
  json meta = {
      {"type", "meta"},
      {"mode", to_string(cfg.mode)},
      {"sink", cfg.sink},
      {"adversary", cfg.adversary.id},
      {"attack", to_string(cfg.adversary.attack)},
      {"placement", to_string(cfg.adversary.placement)},
      {"launch_us", trace.attack_launch_us},
      {"round_duration_s", s_from_us(cfg.round_duration)},
  };
  out << meta.dump() << '\n';

  for (const auto& ev : trace.events) {
    json j = {{"type", "ev"},
              {"k", to_string(ev.kind)},
              {"t", ev.t_us},
              {"n", ev.node}};
    if (ev.peer != kInvalidNode) j["p"] = ev.peer;
    if (ev.kind == TraceKind::CtrlSend || ev.kind == TraceKind::CtrlRecv ||
        ev.kind == TraceKind::SecurityDrop || ev.kind == TraceKind::Replay) {
      j["m"] = to_string(ev.msg);
    }
    if (ev.origin != kInvalidNode) j["o"] = ev.origin;
    if (ev.seq != 0) j["s"] = ev.seq;
    if (ev.bytes != 0) j["b"] = ev.bytes;
    if (ev.reason != DropReason::None) j["r"] = to_string(ev.reason);
    if (ev.secure) j["sec"] = true;
    out << j.dump() << '\n';
  }

  for (const auto& snap : trace.snapshots) {
    json parents = json::array();
    for (const auto& [node, parent] : snap.parent) {
      parents.push_back(json::array({node, parent}));
    }
    json ranks = json::array();
    for (const auto& [node, rank] : snap.rank) {
      ranks.push_back(json::array({node, rank}));
    }
    json j = {{"type", "snap"},
              {"t", snap.t_us},
              {"parent", parents},
              {"rank", ranks}};
    out << j.dump() << '\n';
  }

  for (const auto& [node, ledger] : trace.energy) {
    json j = {{"type", "energy"}, {"n", node},      {"tx", ledger.tx_mj},
              {"rx", ledger.rx_mj}, {"cpu", ledger.cpu_mj},
              {"idle", ledger.idle_mj}};
    out << j.dump() << '\n';
  }
}

void write_trace_jsonl(const Trace& trace, const ScenarioConfig& cfg,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace file: " + path);
  write_trace_jsonl(trace, cfg, out);
}

LoadedTrace read_trace_jsonl(std::istream& in) {
  LoadedTrace loaded;
  bool have_meta = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": bad JSON: " + e.what());
    }
    const std::string type = j.value("type", "");
    if (type == "meta") {
      loaded.cfg.mode = mode_from(j.value("mode", "um"));
      loaded.cfg.sink = j.value("sink", 1);
      loaded.cfg.adversary.id = j.value("adversary", 0);
      loaded.cfg.adversary.attack = attack_from(j.value("attack", "none"));
      loaded.cfg.adversary.placement =
          placement_from(j.value("placement", "internal"));
      loaded.trace.attack_launch_us = j.value("launch_us", std::int64_t{-1});
      loaded.cfg.round_duration =
          us_from_s(j.value("round_duration_s", std::int64_t{1500}));
      have_meta = true;
    } else if (type == "ev") {
      TraceRecord ev;
      ev.kind = trace_kind_from(j.at("k").get<std::string>());
      ev.t_us = j.at("t").get<std::int64_t>();
      ev.node = j.at("n").get<NodeId>();
      ev.peer = j.value("p", kInvalidNode);
      if (j.contains("m")) ev.msg = msg_kind_from(j["m"].get<std::string>());
      ev.origin = j.value("o", kInvalidNode);
      ev.seq = j.value("s", std::uint32_t{0});
      ev.bytes = j.value("b", std::uint32_t{0});
      if (j.contains("r")) ev.reason = drop_reason_from(j["r"].get<std::string>());
      ev.secure = j.value("sec", false);
      loaded.trace.events.push_back(ev);
    } else if (type == "snap") {
      DodagSnapshot snap;
      snap.t_us = j.at("t").get<std::int64_t>();
      for (const auto& pair : j.at("parent")) {
        snap.parent[pair.at(0).get<NodeId>()] = pair.at(1).get<NodeId>();
      }
      for (const auto& pair : j.at("rank")) {
        snap.rank[pair.at(0).get<NodeId>()] = pair.at(1).get<Rank>();
      }
      loaded.trace.snapshots.push_back(snap);
    } else if (type == "energy") {
      EnergyLedger ledger;
      ledger.tx_mj = j.value("tx", 0.0);
      ledger.rx_mj = j.value("rx", 0.0);
      ledger.cpu_mj = j.value("cpu", 0.0);
      ledger.idle_mj = j.value("idle", 0.0);
      loaded.trace.energy[j.at("n").get<NodeId>()] = ledger;
    } else {
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": unknown record type: " + type);
    }
  }
  if (!have_meta) {
    throw std::runtime_error("trace file has no meta record");
  }
  return loaded;
}

LoadedTrace read_trace_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  return read_trace_jsonl(in);
}

}  // namespace rplsim
