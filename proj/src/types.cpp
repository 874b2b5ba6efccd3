#include "rplsim/types.hpp"

namespace rplsim {

const char* to_string(MsgKind k) {
  switch (k) {
    case MsgKind::Dis:
      return "dis";
    case MsgKind::Dio:
      return "dio";
    case MsgKind::Dao:
      return "dao";
    case MsgKind::DaoAck:
      return "dao_ack";
    case MsgKind::Cc:
      return "cc";
    case MsgKind::Data:
      return "data";
  }
  return "?";
}

const char* to_string(SecurityMode m) {
  switch (m) {
    case SecurityMode::Unsecured:
      return "um";
    case SecurityMode::Preinstalled:
      return "psm";
    case SecurityMode::PreinstalledRp:
      return "psmrp";
  }
  return "?";
}

const char* to_string(AttackKind a) {
  switch (a) {
    case AttackKind::None:
      return "none";
    case AttackKind::Blackhole:
      return "blackhole";
    case AttackKind::SelectiveForward:
      return "selective-forward";
    case AttackKind::NeighborReplay:
      return "neighbor-replay";
  }
  return "?";
}

const char* to_string(AdversaryPlacement p) {
  switch (p) {
    case AdversaryPlacement::Insider:
      return "internal";
    case AdversaryPlacement::External:
      return "external";
  }
  return "?";
}

const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::None:
      return "none";
    case DropReason::NoRoute:
      return "no_route";
    case DropReason::AttackerDrop:
      return "attacker_drop";
    case DropReason::SecurityReject:
      return "security_reject";
    case DropReason::QueueTimeout:
      return "queue_timeout";
    case DropReason::Loop:
      return "loop";
    case DropReason::RadioVoid:
      return "radio_void";
  }
  return "?";
}

}  // namespace rplsim
