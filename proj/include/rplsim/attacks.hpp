#pragma once

#include "rplsim/types.hpp"

namespace rplsim {

// Misbehavior plug-in for a single node. Dormant until armed; a dormant
// behavior leaves the node byte-for-byte identical to an honest one.
class AttackBehavior {
 public:
  AttackBehavior() = default;
  AttackBehavior(AttackKind kind, bool blackhole_advertises)
      : kind_(kind), blackhole_advertises_(blackhole_advertises) {}

  AttackKind kind() const { return kind_; }
  void arm() { armed_ = true; }
  bool armed() const { return armed_; }

  // Blackhole swallows every inbound frame before the stack sees it.
  bool drops_all_inbound() const {
    return armed_ && kind_ == AttackKind::Blackhole;
  }

  // Selective forwarding passes control but discards relayed data.
  bool drops_forwarded_data() const {
    return armed_ && (kind_ == AttackKind::SelectiveForward ||
                      kind_ == AttackKind::Blackhole);
  }

  // A silent blackhole also stops advertising itself.
  bool suppresses_own_control() const {
    return armed_ && kind_ == AttackKind::Blackhole && !blackhole_advertises_;
  }

  // Replay applies to frames the node can recognize as beacons; the
  // caller classifies (an unkeyed device cannot see inside a sealed
  // frame, so it can never classify one).
  bool replays_beacons() const {
    return armed_ && kind_ == AttackKind::NeighborReplay;
  }

 private:
  AttackKind kind_ = AttackKind::None;
  bool armed_ = false;
  bool blackhole_advertises_ = false;
};

}  // namespace rplsim
