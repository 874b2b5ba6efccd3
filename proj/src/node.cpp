#include "rplsim/node.hpp"

#include <algorithm>
#include <cassert>

#include "rplsim/simnet.hpp"

namespace rplsim {

namespace {

Rank child_rank(Rank parent_rank) {
  const std::uint32_t r =
      static_cast<std::uint32_t>(parent_rank) + kMinHopRankIncrease;
  return r >= kInfiniteRank ? kInfiniteRank : static_cast<Rank>(r);
}

}  // namespace

Node::Node(NodeId id, SimNet& net)
    : id_(id),
      net_(net),
      cfg_(net.config()),
      is_root_(id == net.config().sink),
      secured_(net.config().node_is_secured(id)),
      trickle_(net.config().trickle) {
  if (secured_) {
    auto key = key_from_hex(cfg_.key_hex);
    assert(key.has_value() && "scenario key must be 32 hex digits");
    key_ = *key;
  }
  if (id_ == cfg_.adversary.id) {
    attack_ = AttackBehavior(cfg_.adversary.attack,
                             cfg_.adversary.blackhole_advertises);
  }
}

SimTime Node::detached_time(SimTime end) const {
  SimTime total = detached_accum_;
  if (detached_since_ >= 0) total += end - detached_since_;
  return total;
}

void Node::power_on() {
  // Radio counts as detached until the node holds a route.
  detached_since_ = 0;
  const SimTime jitter = static_cast<SimTime>(
      net_.rng(id_, "boot").next_range(0, 999999));
  net_.engine().at(jitter, [this] { boot(); });
}

void Node::boot() {
  booted_ = true;
  const SimTime now = net_.now();
  if (is_root_) {
    rank_ = kRootRank;
    detached_accum_ += now - detached_since_;
    detached_since_ = -1;
    trickle_running_ = true;
    trickle_.start(now, net_.rng(id_, "trickle"));
    schedule_trickle_events();
  } else {
    rank_ = kInfiniteRank;
    parentless_since_ = now;
    net_.engine().after(cfg_.timeouts.tick, [this] { on_tick(); });
  }
  schedule_app();
}

// ---------------------------------------------------------------- timers

void Node::on_tick() {
  const SimTime now = net_.now();

  // Parents that fell silent past the timeout are unreachable for real:
  // a misbehaving-but-advertising parent never trips this path.
  std::vector<NodeId> dead;
  for (const auto& [p, info] : parents_) {
    if (now - info.last_heard > cfg_.timeouts.dead_parent) dead.push_back(p);
  }
  for (NodeId p : dead) {
    ++stats_.evictions_silence;
    evict_parent(p, true, false);
  }

  for (auto it = blacklist_.begin(); it != blacklist_.end();) {
    if (it->second <= now) it = blacklist_.erase(it);
    else ++it;
  }

  if (!joined()) {
    const SimTime dis_every = (id_ == cfg_.adversary.id &&
                               cfg_.adversary.placement ==
                                   AdversaryPlacement::External)
                                  ? cfg_.adversary.external_dis_interval
                                  : cfg_.timeouts.dis_interval;
    if (now - parentless_since_ >= cfg_.timeouts.dis_delay &&
        (last_dis_ < 0 || now - last_dis_ >= dis_every)) {
      send_dis();
      last_dis_ = now;
    }
  } else if (!is_root_) {
    if (!pending_dao_ && now >= next_periodic_dao_) {
      emit_dao();
      next_periodic_dao_ = now + cfg_.timeouts.dao_interval;
    } else if (!pending_dao_ && routes_dirty_) {
      emit_dao();
    }
  }

  net_.engine().after(cfg_.timeouts.tick, [this] { on_tick(); });
}

void Node::schedule_trickle_events() {
  const std::uint64_t gen = trickle_.generation();
  net_.engine().at(trickle_.fire_at(), [this, gen] { on_trickle_fire(gen); });
  net_.engine().at(trickle_.interval_end(),
                   [this, gen] { on_trickle_interval_end(gen); });
}

void Node::on_trickle_fire(std::uint64_t gen) {
  if (!trickle_running_ || gen != trickle_.generation()) return;
  if (rank_ == kInfiniteRank) return;
  if (!trickle_.suppressed()) send_dio();
}

void Node::on_trickle_interval_end(std::uint64_t gen) {
  if (!trickle_running_ || gen != trickle_.generation()) return;
  trickle_.advance(net_.now(), net_.rng(id_, "trickle"));
  schedule_trickle_events();
}

// ------------------------------------------------------------- receive

void Node::on_frame(std::span<const std::uint8_t> bytes) {
  if (attack_.drops_all_inbound()) {
    // The stack is dark: everything inbound vanishes. Data losses stay on
    // the ledger; control losses are silent like any unheard frame.
    DecodeResult d = decode_frame(bytes);
    if (d.ok() && d.msg.kind() == MsgKind::Data) {
      ++stats_.attack_dropped_data;
      drop_data(std::get<DataBody>(d.msg.body), DropReason::AttackerDrop);
    } else {
      ++stats_.attack_dropped_ctrl;
    }
    return;
  }

  if (attack_.replays_beacons()) {
    bool is_beacon = false;
    NodeId claimed = kInvalidNode;
    if (!is_secure_frame(bytes)) {
      DecodeResult d = decode_frame(bytes);
      if (d.ok() && d.msg.kind() == MsgKind::Dio) {
        is_beacon = true;
        claimed = d.msg.sender;
      }
    } else if (secured_) {
      // Insider: a real decrypt+verify, paid for, to classify the frame.
      net_.charge_cpu(id_);
      auto plain = open_frame(key_, bytes);
      if (plain) {
        DecodeResult d = decode_frame(*plain);
        if (d.ok() && d.msg.kind() == MsgKind::Dio) {
          is_beacon = true;
          claimed = d.msg.sender;
        }
      }
    }
    if (is_beacon) {
      maybe_replay(bytes, true, claimed);
    }
  }

  if (is_secure_frame(bytes)) {
    handle_secure(bytes);
  } else {
    handle_plain(bytes);
  }
}

void Node::maybe_replay(std::span<const std::uint8_t> bytes, bool,
                        NodeId claimed_sender) {
  ++stats_.replays_emitted;
  TraceRecord r;
  r.kind = TraceKind::Replay;
  r.t_us = net_.now();
  r.node = id_;
  r.peer = claimed_sender;
  r.msg = MsgKind::Dio;
  r.bytes = static_cast<std::uint32_t>(bytes.size());
  r.secure = is_secure_frame(bytes);
  net_.record(r);
  net_.transmit(id_, kInvalidNode,
                std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
}

void Node::handle_plain(std::span<const std::uint8_t> bytes) {
  DecodeResult d = decode_frame(bytes);
  if (!d.ok()) return;
  Message& m = d.msg;
  if (m.sender == id_) return;

  if (m.kind() == MsgKind::Data) {
    // Application payloads ride outside the control-plane envelope in
    // every mode; the routing layer forwards them on face value.
    handle_data(m, std::get<DataBody>(m.body), false);
    return;
  }
  if (m.kind() == MsgKind::Cc) {
    security_drop(m, false);
    return;
  }
  if (secured_) {
    // A keyed stack refuses bare control frames outright — they carry no
    // proof of origin. No timers are touched.
    security_drop(m, false);
    return;
  }
  process_control(m, 0, false, static_cast<std::uint32_t>(bytes.size()));
}

void Node::handle_secure(std::span<const std::uint8_t> bytes) {
  if (!secured_) return;  // no key material: unparseable noise
  auto hdr = peek_secure_header(bytes);
  if (!hdr) return;
  net_.charge_cpu(id_);  // one verify attempt, successful or not
  auto plain = open_frame(key_, bytes);
  if (!plain) {
    security_drop_raw(MsgKind::Dio, hdr->sender, true);
    return;
  }
  if (hdr->sender == id_) return;
  DecodeResult d = decode_frame(*plain);
  if (!d.ok()) return;
  Message& m = d.msg;
  if (m.sender != hdr->sender) {
    // Inner/outer origin mismatch: forged framing.
    security_drop(m, true);
    return;
  }

  if (cfg_.mode == SecurityMode::PreinstalledRp && m.kind() != MsgKind::Cc) {
    if (!replay_gate(m, hdr->counter)) return;
  }
  if (m.kind() != MsgKind::Cc) {
    auto& ps = peers_[m.sender];
    ps.highest_seen = std::max(ps.highest_seen, hdr->counter);
    if (cfg_.mode == SecurityMode::Preinstalled) ps.verified = true;
  }
  process_control(m, hdr->counter, true,
                  static_cast<std::uint32_t>(bytes.size()));
}

bool Node::replay_gate(const Message& m, std::uint32_t counter) {
  auto it = peers_.find(m.sender);
  const bool known = it != peers_.end() && it->second.verified;
  if (!known) {
    ++stats_.replay_suspects;
    issue_challenge(m.sender, m, counter, true);
    return false;
  }
  if (counter <= it->second.highest_seen) {
    ++stats_.replay_suspects;
    issue_challenge(m.sender, m, counter, false);
    return false;
  }
  return true;
}

void Node::process_control(const Message& m, std::uint32_t counter,
                           bool secure, std::uint32_t frame_bytes) {
  ++stats_.ctrl_received;
  TraceRecord r;
  r.kind = TraceKind::CtrlRecv;
  r.t_us = net_.now();
  r.node = id_;
  r.peer = m.sender;
  r.msg = m.kind();
  r.seq = counter;
  r.bytes = frame_bytes;
  r.secure = secure;
  net_.record(r);

  switch (m.kind()) {
    case MsgKind::Dio:
      handle_dio(m, std::get<DioBody>(m.body));
      break;
    case MsgKind::Dis:
      handle_dis(m);
      break;
    case MsgKind::Dao:
      handle_dao(m, std::get<DaoBody>(m.body));
      break;
    case MsgKind::DaoAck:
      handle_dao_ack(m, std::get<DaoAckBody>(m.body));
      break;
    case MsgKind::Cc:
      handle_cc(m, std::get<CcBody>(m.body), counter);
      break;
    case MsgKind::Data:
      break;  // not a control frame; handled elsewhere
  }
}

// ------------------------------------------------------------- security

void Node::issue_challenge(NodeId peer, const Message& held,
                           std::uint32_t held_counter, bool first_contact) {
  auto it = challenges_.find(peer);
  if (it != challenges_.end()) {
    // One outstanding challenge per peer; extra suspects are shed.
    security_drop(held, true);
    return;
  }
  PendingChallenge pc;
  pc.nonce = static_cast<std::uint32_t>(net_.rng(id_, "cc").next_u64());
  pc.reissues = 0;
  pc.gen = ++challenge_gen_;
  pc.held = held;
  pc.held_counter = held_counter;
  pc.first_contact = first_contact;
  challenges_.emplace(peer, std::move(pc));
  ++stats_.challenges_issued;
  send_challenge(peer);
  const std::uint64_t gen = challenge_gen_;
  net_.engine().after(cfg_.timeouts.cc_timeout,
                      [this, peer, gen] { on_challenge_timeout(peer, gen); });
}

void Node::send_challenge(NodeId peer) {
  auto it = challenges_.find(peer);
  if (it == challenges_.end()) return;
  send_control(make_cc_request(id_, peer, it->second.nonce), peer);
}

void Node::on_challenge_timeout(NodeId peer, std::uint64_t gen) {
  auto it = challenges_.find(peer);
  if (it == challenges_.end() || it->second.gen != gen) return;
  if (it->second.reissues < cfg_.timeouts.cc_max_reissues) {
    ++it->second.reissues;
    send_challenge(peer);
    net_.engine().after(cfg_.timeouts.cc_timeout,
                        [this, peer, gen] { on_challenge_timeout(peer, gen); });
    return;
  }
  // Peer never proved liveness; whatever it sent stays unprocessed.
  ++stats_.quarantine_expired;
  security_drop(it->second.held, true);
  challenges_.erase(it);
}

void Node::handle_cc(const Message& m, const CcBody& b, std::uint32_t counter) {
  if (cfg_.mode != SecurityMode::PreinstalledRp) return;
  if (!b.is_response) {
    // Challenges are answered statelessly: echo the nonce, attach the
    // current send counter as the freshness reference.
    ++stats_.challenges_answered;
    send_control(make_cc_response(id_, m.sender, b.nonce, tx_counter_),
                 m.sender);
    return;
  }
  auto it = challenges_.find(m.sender);
  if (it == challenges_.end() || it->second.nonce != b.nonce) return;
  PendingChallenge pc = std::move(it->second);
  challenges_.erase(it);  // release happens at most once

  auto& ps = peers_[m.sender];
  ps.verified = true;
  ps.highest_seen = std::max({ps.highest_seen, b.counter_echo, counter});
  ++stats_.quarantine_released;

  if (pc.first_contact) {
    // Bootstrapping: the exchange proved the peer live; its opening
    // message is admitted and seeds the counter window.
    ps.highest_seen = std::max(ps.highest_seen, pc.held_counter);
    process_control(pc.held, pc.held_counter, true, 0);
    return;
  }
  // Re-synchronised: anything at or below the confirmed counter is a
  // replay and dies here.
  if (pc.held_counter > ps.highest_seen) {
    ps.highest_seen = pc.held_counter;
    process_control(pc.held, pc.held_counter, true, 0);
  } else {
    security_drop(pc.held, true);
  }
}

void Node::security_drop(const Message& m, bool secure) {
  security_drop_raw(m.kind(), m.sender, secure);
}

void Node::security_drop_raw(MsgKind kind, NodeId claimed, bool secure) {
  ++stats_.security_rejects;
  TraceRecord r;
  r.kind = TraceKind::SecurityDrop;
  r.t_us = net_.now();
  r.node = id_;
  r.peer = claimed;
  r.msg = kind;
  r.reason = DropReason::SecurityReject;
  r.secure = secure;
  net_.record(r);
}

// -------------------------------------------------------------- routing

void Node::handle_dio(const Message& m, const DioBody& b) {
  if (is_root_) {
    trickle_.note_consistent();
    return;
  }
  if (b.rank == kInfiniteRank) {
    // Poison: the sender lost its route. Forget it as a candidate.
    auto it = parents_.find(m.sender);
    if (it != parents_.end()) {
      parents_.erase(it);
      if (preferred_ == m.sender) {
        preferred_ = kInvalidNode;
        reselect_parent();
      }
    }
    return;
  }
  if (blacklisted(m.sender)) return;
  if (m.sender == preferred_) {
    auto it = parents_.find(preferred_);
    if (it != parents_.end() && b.rank > it->second.rank) {
      // The preferred parent moved deeper. Every other cached candidate's
      // rank was learned under the old regime and may be stale (a sibling
      // still advertising its pre-increase height), so flush them; live
      // neighbors re-announce within one beacon interval.
      std::erase_if(parents_,
                    [&](const auto& kv) { return kv.first != preferred_; });
    }
  }
  auto& info = parents_[m.sender];
  info.rank = b.rank;
  info.last_heard = net_.now();
  trickle_.note_consistent();
  reselect_parent();
}

bool Node::blacklisted(NodeId p) const {
  auto it = blacklist_.find(p);
  return it != blacklist_.end() && it->second > net_.now();
}

void Node::reselect_parent() {
  if (is_root_) return;
  // Reference height: staying with the current parent if it is still a
  // candidate, otherwise unbounded. Deeper-or-equal candidates are never
  // adopted, which keeps descendants from becoming parents.
  Rank ref = kInfiniteRank;
  if (preferred_ != kInvalidNode) {
    auto it = parents_.find(preferred_);
    if (it != parents_.end()) ref = child_rank(it->second.rank);
  }

  NodeId best = kInvalidNode;
  Rank best_rank = kInfiniteRank;
  for (const auto& [p, info] : parents_) {
    if (ref != kInfiniteRank && info.rank >= ref) continue;
    if (info.rank == kInfiniteRank) continue;
    if (info.rank < best_rank || (info.rank == best_rank && p < best)) {
      best = p;
      best_rank = info.rank;
    }
  }
  if (rank_ != kInfiniteRank && best == kInvalidNode) {
    // Had a route, now no candidate at all (callers may have cleared
    // preferred_ already): tear down, poison, and start soliciting.
    local_repair();
    return;
  }
  if (best == kInvalidNode) {
    rank_ = kInfiniteRank;
    return;
  }
  const bool was_joined = preferred_ != kInvalidNode;
  const NodeId old = preferred_;
  rank_ = child_rank(best_rank);
  if (best == old) return;

  preferred_ = best;
  adopt_parent(best);
  if (!was_joined) {
    // First route: radio drops out of continuous listen.
    if (detached_since_ >= 0) {
      detached_accum_ += net_.now() - detached_since_;
      detached_since_ = -1;
    }
    if (!trickle_running_) {
      trickle_running_ = true;
      trickle_.start(net_.now(), net_.rng(id_, "trickle"));
      schedule_trickle_events();
    }
    next_periodic_dao_ = net_.now() + cfg_.timeouts.dao_interval;
  }
}

void Node::adopt_parent(NodeId p) {
  ++stats_.parent_changes;
  TraceRecord r;
  r.kind = TraceKind::ParentChange;
  r.t_us = net_.now();
  r.node = id_;
  r.peer = p;
  net_.record(r);
  if (trickle_running_) {
    trickle_.reset(net_.now(), net_.rng(id_, "trickle"));
    schedule_trickle_events();
  }
  pending_dao_.reset();
  if (p != kInvalidNode && p != last_acked_parent_) {
    emit_dao();
  }
}

void Node::evict_parent(NodeId p, bool blacklist, bool unreachable) {
  parents_.erase(p);
  if (blacklist) {
    blacklist_[p] = net_.now() + cfg_.timeouts.parent_blacklist;
  }
  if (unreachable) ++stats_.evictions_unreachable;
  if (preferred_ == p) {
    preferred_ = kInvalidNode;
    pending_dao_.reset();
    reselect_parent();
  }
}

void Node::local_repair() {
  if (is_root_) return;
  const bool had_route = rank_ != kInfiniteRank;
  rank_ = kInfiniteRank;
  preferred_ = kInvalidNode;
  pending_dao_.reset();
  if (had_route) send_poison();
  parents_.clear();
  parentless_since_ = net_.now();
  last_dis_ = -1;
  if (detached_since_ < 0) detached_since_ = net_.now();
  TraceRecord r;
  r.kind = TraceKind::ParentChange;
  r.t_us = net_.now();
  r.node = id_;
  r.peer = kInvalidNode;
  net_.record(r);
  ++stats_.parent_changes;
}

void Node::send_poison() {
  send_control(make_dio(id_, cfg_.sink, 1, kInfiniteRank), kInvalidNode);
}

void Node::handle_dis(const Message& m) {
  if (rank_ == kInfiniteRank) return;
  if (m.dest == id_) {
    send_dio();
  } else if (m.dest == kInvalidNode) {
    // A solicitation in earshot: restart fast beaconing for the newcomer.
    if (trickle_running_) {
      trickle_.reset(net_.now(), net_.rng(id_, "trickle"));
      schedule_trickle_events();
    }
  }
}

// ------------------------------------------------------------ DAO plane

void Node::handle_dao(const Message& m, const DaoBody& b) {
  if (!is_root_ && !joined()) return;
  bool changed = false;
  for (NodeId t : b.targets) {
    if (t == id_) continue;
    auto it = routes_.find(t);
    if (it == routes_.end() || it->second != m.sender) {
      routes_[t] = m.sender;
      changed = true;
    }
  }
  if (b.ack_request) send_dao_ack(m.sender, b.seq);
  if (changed && !is_root_) routes_dirty_ = true;
}

void Node::handle_dao_ack(const Message& m, const DaoAckBody& b) {
  if (!pending_dao_ || m.sender != preferred_) return;
  if (b.seq != pending_dao_->seq) return;
  pending_dao_.reset();
  last_acked_parent_ = m.sender;
  if (id_ == cfg_.adversary.id) net_.notify_adversary_joined();
}

void Node::emit_dao() {
  if (is_root_ || !joined()) return;
  if (attack_.suppresses_own_control()) return;
  routes_dirty_ = false;
  ++dao_seq_;
  std::vector<NodeId> targets;
  targets.push_back(id_);
  for (const auto& [t, via] : routes_) targets.push_back(t);
  PendingDao pd;
  pd.seq = dao_seq_;
  pd.tx_count = 1;
  pd.last_tx = net_.now();
  pd.gen = ++dao_gen_;
  pending_dao_ = pd;
  send_control(make_dao(id_, preferred_, dao_seq_, std::move(targets)),
               preferred_);
  const std::uint64_t gen = pd.gen;
  net_.engine().after(cfg_.timeouts.dao_ack_timeout,
                      [this, gen] { on_dao_timeout(gen); });
}

void Node::on_dao_timeout(std::uint64_t gen) {
  if (!pending_dao_ || pending_dao_->gen != gen) return;
  if (!joined()) {
    pending_dao_.reset();
    return;
  }
  if (pending_dao_->tx_count < cfg_.timeouts.dao_max_tx) {
    ++pending_dao_->tx_count;
    pending_dao_->last_tx = net_.now();
    std::vector<NodeId> targets;
    targets.push_back(id_);
    for (const auto& [t, via] : routes_) targets.push_back(t);
    send_control(make_dao(id_, preferred_, pending_dao_->seq,
                          std::move(targets)),
                 preferred_);
    net_.engine().after(cfg_.timeouts.dao_ack_timeout,
                        [this, gen] { on_dao_timeout(gen); });
    return;
  }

  // Route registration exhausted. A parent that kept beaconing through
  // the retry window is advertising a service it does not deliver —
  // evict it. A silent parent may simply be gone; that is the silence
  // timer's jurisdiction, so only suspicion is logged here.
  ++stats_.dao_exhaustions;
  const NodeId p = preferred_;
  const SimTime last_tx = pending_dao_->last_tx;
  pending_dao_.reset();
  auto it = parents_.find(p);
  const bool heard_since_retry =
      it != parents_.end() && it->second.last_heard >= last_tx;
  if (heard_since_retry) {
    evict_parent(p, true, true);
  } else {
    ++stats_.parent_suspicions;
    net_.engine().after(cfg_.timeouts.dao_retry_backoff, [this] {
      if (joined() && !pending_dao_) emit_dao();
    });
  }
}

void Node::send_dao_ack(NodeId child, std::uint8_t seq) {
  send_control(make_dao_ack(id_, child, seq), child);
}

// ------------------------------------------------------------- sending

void Node::send_dio() {
  send_control(make_dio(id_, cfg_.sink, 1, rank_), kInvalidNode);
}

void Node::send_dis() {
  send_control(make_dis(id_, kInvalidNode), kInvalidNode);
}

void Node::send_control(Message m, NodeId radio_dest) {
  if (attack_.suppresses_own_control()) return;
  std::vector<std::uint8_t> frame;
  std::uint32_t counter = 0;
  if (secured_) {
    auto inner = encode_inner(m, cfg_.sizes);
    SecureHeader hdr;
    hdr.level = SecLevel::EncMac;
    hdr.key_id = 0;
    hdr.sender = id_;
    hdr.counter = ++tx_counter_;
    counter = hdr.counter;
    net_.charge_cpu(id_);
    frame = seal_frame(key_, hdr, inner);
  } else {
    EncodeResult er = encode_plain(m, cfg_.sizes);
    if (!er.ok()) return;  // plain consistency checks are unconstructible
    frame = std::move(er.bytes);
  }
  ++stats_.ctrl_sent;
  TraceRecord r;
  r.kind = TraceKind::CtrlSend;
  r.t_us = net_.now();
  r.node = id_;
  r.peer = radio_dest;
  r.msg = m.kind();
  r.seq = counter;
  r.bytes = static_cast<std::uint32_t>(frame.size());
  r.secure = secured_;
  net_.record(r);
  net_.transmit(id_, radio_dest, std::move(frame));
}

// ----------------------------------------------------------- data plane

void Node::schedule_app() {
  if (!cfg_.node_sends_data(id_)) return;
  Rng& rng = net_.rng(id_, "app");
  for (int i = 0; i < cfg_.app.packets_per_round; ++i) {
    const SimTime jitter = static_cast<SimTime>(rng.next_range(
        0, static_cast<std::uint64_t>(cfg_.app.period - 1)));
    const SimTime t = cfg_.app.start + static_cast<SimTime>(i) * cfg_.app.period + jitter;
    const std::uint32_t seq = static_cast<std::uint32_t>(i);
    net_.engine().at(t, [this, seq] { originate_data(seq); });
  }
}

void Node::originate_data(std::uint32_t seq) {
  ++stats_.data_originated;
  TraceRecord r;
  r.kind = TraceKind::DataSend;
  r.t_us = net_.now();
  r.node = id_;
  r.origin = id_;
  r.seq = seq;
  r.bytes = static_cast<std::uint32_t>(cfg_.sizes.data);
  net_.record(r);

  Message m = make_data(id_, cfg_.sink, id_, seq, net_.now());
  if (!joined()) {
    drop_data(std::get<DataBody>(m.body), DropReason::NoRoute);
    return;
  }
  EncodeResult er = encode_plain(m, cfg_.sizes);
  net_.transmit(id_, preferred_, std::move(er.bytes));
}

void Node::handle_data(const Message& m, const DataBody& b, bool) {
  if (is_root_) {
    ++stats_.data_delivered;
    TraceRecord r;
    r.kind = TraceKind::DataDeliver;
    r.t_us = net_.now();
    r.node = id_;
    r.peer = m.sender;
    r.origin = b.origin;
    r.seq = b.seq;
    r.bytes = static_cast<std::uint32_t>(cfg_.sizes.data);
    net_.record(r);
    return;
  }
  if (attack_.drops_forwarded_data()) {
    ++stats_.attack_dropped_data;
    drop_data(b, DropReason::AttackerDrop);
    return;
  }
  if (b.origin == id_) {
    // Own packet came back: the graph has a cycle through us. Tear down.
    drop_data(b, DropReason::Loop);
    local_repair();
    return;
  }
  if (!joined()) {
    drop_data(b, DropReason::NoRoute);
    return;
  }
  if (b.ttl == 0) {
    drop_data(b, DropReason::Loop);
    return;
  }
  DataBody fwd = b;
  --fwd.ttl;
  ++fwd.hops;
  Message out = m;
  out.sender = id_;
  out.body = fwd;
  ++stats_.data_forwarded;
  TraceRecord r;
  r.kind = TraceKind::DataForward;
  r.t_us = net_.now();
  r.node = id_;
  r.peer = preferred_;
  r.origin = fwd.origin;
  r.seq = fwd.seq;
  r.bytes = static_cast<std::uint32_t>(cfg_.sizes.data);
  net_.record(r);
  EncodeResult er = encode_plain(out, cfg_.sizes);
  net_.transmit(id_, preferred_, std::move(er.bytes));
}

void Node::drop_data(const DataBody& b, DropReason reason) {
  TraceRecord r;
  r.kind = TraceKind::DataDrop;
  r.t_us = net_.now();
  r.node = id_;
  r.msg = MsgKind::Data;
  r.origin = b.origin;
  r.seq = b.seq;
  r.bytes = static_cast<std::uint32_t>(cfg_.sizes.data);
  r.reason = reason;
  net_.record(r);
}

// -------------------------------------------------------------- attack

void Node::on_attack_launch() { attack_.arm(); }

}  // namespace rplsim
