#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rplsim/types.hpp"

namespace rplsim {

enum class TraceKind : std::uint8_t {
  DataSend = 0,     // origin hands a fresh packet to its stack
  DataForward = 1,  // intermediate node re-transmits a packet
  DataDeliver = 2,  // sink accepts a packet
  DataDrop = 3,     // packet discarded (reason set)
  CtrlSend = 4,     // protocol stack emits a control frame
  CtrlRecv = 5,     // control frame accepted by a receiving stack
  SecurityDrop = 6, // control frame rejected before processing
  ParentChange = 7, // preferred parent switched (peer = new parent, 0 = none)
  Replay = 8,       // adversary re-transmits a captured frame verbatim
  AttackLaunch = 9, // adversary behavior armed
};

const char* to_string(TraceKind k);

// One flat record per event; unused fields stay zero. Kept POD-ish so a
// round's trace stays cheap to build and serialize.
struct TraceRecord {
  TraceKind kind = TraceKind::DataSend;
  SimTime t_us = 0;
  NodeId node = kInvalidNode;   // where the event happened
  NodeId peer = kInvalidNode;   // counterparty if any (sender/new parent)
  MsgKind msg = MsgKind::Data;
  NodeId origin = kInvalidNode; // data: origin node
  std::uint32_t seq = 0;        // data: origin sequence; ctrl: send counter
  std::uint32_t bytes = 0;
  DropReason reason = DropReason::None;
  bool secure = false;
};

struct DodagSnapshot {
  SimTime t_us = 0;
  // node -> preferred parent (kInvalidNode if none)
  std::map<NodeId, NodeId> parent;
  std::map<NodeId, Rank> rank;
};

struct EnergyLedger {
  double tx_mj = 0.0;
  double rx_mj = 0.0;
  double cpu_mj = 0.0;
  double idle_mj = 0.0;
  double total() const { return tx_mj + rx_mj + cpu_mj + idle_mj; }
};

struct Trace {
  std::vector<TraceRecord> events;
  std::vector<DodagSnapshot> snapshots;
  std::map<NodeId, EnergyLedger> energy;
  SimTime attack_launch_us = -1;  // -1 = never launched

  void add(const TraceRecord& r) { events.push_back(r); }
};

}  // namespace rplsim
