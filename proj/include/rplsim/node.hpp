#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rplsim/attacks.hpp"
#include "rplsim/config.hpp"
#include "rplsim/crypto.hpp"
#include "rplsim/trickle.hpp"
#include "rplsim/types.hpp"
#include "rplsim/wire.hpp"

namespace rplsim {

class SimNet;

struct NodeStats {
  std::uint64_t ctrl_sent = 0;
  std::uint64_t ctrl_received = 0;
  std::uint64_t security_rejects = 0;
  std::uint64_t replay_suspects = 0;
  std::uint64_t challenges_issued = 0;
  std::uint64_t challenges_answered = 0;
  std::uint64_t quarantine_released = 0;
  std::uint64_t quarantine_expired = 0;
  std::uint64_t parent_changes = 0;
  std::uint64_t dao_exhaustions = 0;
  std::uint64_t parent_suspicions = 0;
  std::uint64_t evictions_silence = 0;
  std::uint64_t evictions_unreachable = 0;
  std::uint64_t attack_dropped_data = 0;
  std::uint64_t attack_dropped_ctrl = 0;
  std::uint64_t replays_emitted = 0;
  std::uint64_t data_originated = 0;
  std::uint64_t data_forwarded = 0;
  std::uint64_t data_delivered = 0;
};

class Node {
 public:
  Node(NodeId id, SimNet& net);

  // Schedules boot; nothing happens before the boot jitter elapses.
  void power_on();

  // Radio delivery entry point.
  void on_frame(std::span<const std::uint8_t> bytes);

  void on_attack_launch();

  NodeId id() const { return id_; }
  bool is_root() const { return is_root_; }
  Rank rank() const { return rank_; }
  bool joined() const { return is_root_ || preferred_ != kInvalidNode; }
  NodeId preferred_parent() const { return preferred_; }
  std::size_t parent_set_size() const { return parents_.size(); }
  const std::map<NodeId, NodeId>& routes() const { return routes_; }
  const NodeStats& stats() const { return stats_; }
  const AttackBehavior& attack() const { return attack_; }

  // Total time spent without a route (radio in continuous listen),
  // evaluated at `end` for the idle-energy split.
  SimTime detached_time(SimTime end) const;

 private:
  struct ParentInfo {
    Rank rank = kInfiniteRank;
    SimTime last_heard = 0;
  };

  struct PeerState {
    std::uint32_t highest_seen = 0;
    bool verified = false;
  };

  // One in-flight challenge per peer; the first suspect frame waits in
  // quarantine, later suspects from the same peer are coalesced away.
  struct PendingChallenge {
    std::uint32_t nonce = 0;
    int reissues = 0;
    std::uint64_t gen = 0;
    Message held;
    std::uint32_t held_counter = 0;
    bool first_contact = false;  // releasing bootstraps the peer
  };

  struct PendingDao {
    std::uint8_t seq = 0;
    int tx_count = 0;
    SimTime last_tx = 0;
    std::uint64_t gen = 0;
  };

  // --- boot & timers ---
  void boot();
  void on_tick();
  void schedule_trickle_events();
  void on_trickle_fire(std::uint64_t gen);
  void on_trickle_interval_end(std::uint64_t gen);

  // --- receive pipeline ---
  void handle_plain(std::span<const std::uint8_t> bytes);
  void handle_secure(std::span<const std::uint8_t> bytes);
  bool replay_gate(const Message& m, std::uint32_t counter);
  void process_control(const Message& m, std::uint32_t counter, bool secure,
                       std::uint32_t frame_bytes);
  void handle_dio(const Message& m, const DioBody& b);
  void handle_dis(const Message& m);
  void handle_dao(const Message& m, const DaoBody& b);
  void handle_dao_ack(const Message& m, const DaoAckBody& b);
  void handle_cc(const Message& m, const CcBody& b, std::uint32_t counter);
  void handle_data(const Message& m, const DataBody& b, bool was_forwarded);

  // --- security ---
  void issue_challenge(NodeId peer, const Message& held,
                       std::uint32_t held_counter, bool first_contact);
  void send_challenge(NodeId peer);
  void on_challenge_timeout(NodeId peer, std::uint64_t gen);
  void security_drop(const Message& m, bool secure);
  void security_drop_raw(MsgKind kind, NodeId claimed, bool secure);

  // --- routing ---
  void reselect_parent();
  void adopt_parent(NodeId p);
  void evict_parent(NodeId p, bool blacklist, bool unreachable);
  void local_repair();
  void send_poison();
  void update_own_rank();
  bool blacklisted(NodeId p) const;

  // --- control emission ---
  void send_dio();
  void send_dis();
  void schedule_dis();
  void emit_dao();
  void on_dao_timeout(std::uint64_t gen);
  void send_dao_ack(NodeId child, std::uint8_t seq);
  void send_control(Message m, NodeId radio_dest);

  // --- data plane ---
  void schedule_app();
  void originate_data(std::uint32_t seq);
  void forward_data(Message m, DataBody b);
  void drop_data(const DataBody& b, DropReason reason);

  // --- attack hooks ---
  void maybe_replay(std::span<const std::uint8_t> bytes, bool classified_dio,
                    NodeId claimed_sender);

  NodeId id_;
  SimNet& net_;
  const ScenarioConfig& cfg_;
  bool is_root_;
  bool secured_;
  Key key_{};

  Rank rank_ = kInfiniteRank;
  NodeId preferred_ = kInvalidNode;
  std::map<NodeId, ParentInfo> parents_;
  std::map<NodeId, SimTime> blacklist_;  // peer -> holddown end
  std::map<NodeId, NodeId> routes_;      // target -> next hop (children side)

  Trickle trickle_;
  bool trickle_running_ = false;

  std::uint32_t tx_counter_ = 0;
  std::map<NodeId, PeerState> peers_;
  std::map<NodeId, PendingChallenge> challenges_;
  std::uint64_t challenge_gen_ = 0;
  std::uint64_t dao_gen_ = 0;

  std::uint8_t dao_seq_ = 0;
  std::optional<PendingDao> pending_dao_;
  NodeId last_acked_parent_ = kInvalidNode;
  SimTime next_periodic_dao_ = 0;
  bool routes_dirty_ = false;

  SimTime parentless_since_ = 0;
  SimTime last_dis_ = -1;
  bool booted_ = false;

  SimTime detached_accum_ = 0;    // closed detached intervals
  SimTime detached_since_ = 0;    // current interval start, -1 = attached

  AttackBehavior attack_;
  NodeStats stats_;
};

}  // namespace rplsim
