#include "rplsim/simnet.hpp"

#include <algorithm>

#include "rplsim/node.hpp"

namespace rplsim {

namespace {

// 250 kbit/s link: 31.25 bytes per ms, plus fixed turnaround.
SimTime tx_delay(std::size_t bytes) {
  return static_cast<SimTime>(bytes) * 32 + 1000;
}

}  // namespace

SimNet::SimNet(const ScenarioConfig& cfg, int round_index)
    : cfg_(cfg), round_index_(round_index) {}

SimNet::~SimNet() = default;

void SimNet::run() {
  start();
  run_until(cfg_.round_duration);
  finish();
}

void SimNet::start() {
  if (started_) return;
  started_ = true;
  build_nodes();
  schedule_snapshots();
  // Fallback: an adversary that never completes a join (an outsider, or a
  // partitioned insider) still arms on schedule.
  if (cfg_.adversary.attack != AttackKind::None &&
      nodes_.count(cfg_.adversary.id) > 0) {
    engine_.at(cfg_.adversary.join_fallback, [this] {
      if (!attack_launch_scheduled_) {
        attack_launch_scheduled_ = true;
        engine_.after(cfg_.adversary.launch_after_join, [this] { do_launch(); });
      }
    });
  }
}

void SimNet::run_until(SimTime until) { engine_.run_until(until); }

void SimNet::finish() {
  if (finished_) return;
  finished_ = true;
  take_snapshot();
  for (auto& [id, node] : nodes_) {
    const SimTime detached = node->detached_time(cfg_.round_duration);
    const SimTime attached = cfg_.round_duration - detached;
    trace_.energy[id].idle_mj +=
        ms_from_us(attached) * cfg_.energy.idle_mj_per_ms +
        ms_from_us(detached) * cfg_.energy.detached_idle_mj_per_ms;
  }
}

void SimNet::build_nodes() {
  for (const auto& [id, pos] : cfg_.topology.positions) {
    auto n = std::make_unique<Node>(id, *this);
    nodes_.emplace(id, std::move(n));
  }
  for (auto& [id, node] : nodes_) {
    node->power_on();
  }
}

void SimNet::schedule_snapshots() {
  for (SimTime t = cfg_.snapshot_period; t < cfg_.round_duration;
       t += cfg_.snapshot_period) {
    engine_.at(t, [this] { take_snapshot(); });
  }
}

void SimNet::take_snapshot() {
  DodagSnapshot snap;
  snap.t_us = engine_.now();
  for (const auto& [id, node] : nodes_) {
    snap.parent[id] = node->preferred_parent();
    snap.rank[id] = node->rank();
  }
  trace_.snapshots.push_back(std::move(snap));
}

void SimNet::do_launch() {
  if (attack_launched_) return;
  attack_launched_ = true;
  trace_.attack_launch_us = engine_.now();
  TraceRecord r;
  r.kind = TraceKind::AttackLaunch;
  r.t_us = engine_.now();
  r.node = cfg_.adversary.id;
  record(r);
  auto it = nodes_.find(cfg_.adversary.id);
  if (it != nodes_.end()) it->second->on_attack_launch();
}

void SimNet::notify_adversary_joined() {
  if (attack_launch_scheduled_ || cfg_.adversary.attack == AttackKind::None) {
    return;
  }
  attack_launch_scheduled_ = true;
  engine_.after(cfg_.adversary.launch_after_join, [this] { do_launch(); });
}

void SimNet::transmit(NodeId from, NodeId radio_dest,
                      std::vector<std::uint8_t> frame) {
  const std::size_t bytes = frame.size();
  trace_.energy[from].tx_mj +=
      static_cast<double>(bytes) * cfg_.energy.tx_mj_per_byte;
  const SimTime arrive = engine_.now() + tx_delay(bytes);
  auto shared = std::make_shared<const std::vector<std::uint8_t>>(std::move(frame));

  Rng& loss_rng = rng(kInvalidNode, "loss");

  if (radio_dest == kInvalidNode) {
    for (const auto& [id, node] : nodes_) {
      if (id == from) continue;
      if (!cfg_.topology.in_range(from, id)) continue;
      if (cfg_.loss_prob > 0.0 && loss_rng.next_double() < cfg_.loss_prob) {
        continue;
      }
      NodeId to = id;
      engine_.at(arrive, [this, to, shared] { deliver(to, shared); });
    }
    return;
  }

  const bool reachable = nodes_.count(radio_dest) > 0 &&
                         cfg_.topology.in_range(from, radio_dest);
  const bool lost = reachable && cfg_.loss_prob > 0.0 &&
                    loss_rng.next_double() < cfg_.loss_prob;
  if (reachable && !lost) {
    NodeId to = radio_dest;
    engine_.at(arrive, [this, to, shared] { deliver(to, shared); });
    return;
  }
  // Unicast that nobody hears. Data losses are part of the delivery
  // ledger; control losses only show up as missing acknowledgements.
  DecodeResult d = decode_frame(*shared);
  if (d.ok() && d.msg.kind() == MsgKind::Data) {
    const auto& body = std::get<DataBody>(d.msg.body);
    TraceRecord r;
    r.kind = TraceKind::DataDrop;
    r.t_us = engine_.now();
    r.node = from;
    r.peer = radio_dest;
    r.msg = MsgKind::Data;
    r.origin = body.origin;
    r.seq = body.seq;
    r.bytes = static_cast<std::uint32_t>(bytes);
    r.reason = DropReason::RadioVoid;
    record(r);
  }
}

void SimNet::deliver(NodeId to,
                     std::shared_ptr<const std::vector<std::uint8_t>> frame) {
  auto it = nodes_.find(to);
  if (it == nodes_.end()) return;
  trace_.energy[to].rx_mj +=
      static_cast<double>(frame->size()) * cfg_.energy.rx_mj_per_byte;
  it->second->on_frame(*frame);
}

Rng& SimNet::rng(NodeId node, const std::string& purpose) {
  auto key = std::make_pair(node, purpose);
  auto it = rngs_.find(key);
  if (it == rngs_.end()) {
    auto r = std::make_unique<Rng>(
        derive_rng(cfg_.seed, static_cast<std::uint32_t>(round_index_),
                   node, purpose));
    it = rngs_.emplace(std::move(key), std::move(r)).first;
  }
  return *it->second;
}

void SimNet::charge_cpu(NodeId node) {
  trace_.energy[node].cpu_mj += cfg_.energy.crypto_mj_per_op;
}

Node& SimNet::node(NodeId id) { return *nodes_.at(id); }

std::vector<NodeId> SimNet::node_ids() const {
  std::vector<NodeId> out;
  out.reserve(nodes_.size());
  for (const auto& [id, _] : nodes_) out.push_back(id);
  return out;
}

}  // namespace rplsim
