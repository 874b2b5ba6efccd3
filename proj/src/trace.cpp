#include "rplsim/trace.hpp"

namespace rplsim {

const char* to_string(TraceKind k) {
  switch (k) {
    case TraceKind::DataSend: return "data_send";
    case TraceKind::DataForward: return "data_forward";
    case TraceKind::DataDeliver: return "data_deliver";
    case TraceKind::DataDrop: return "data_drop";
    case TraceKind::CtrlSend: return "ctrl_send";
    case TraceKind::CtrlRecv: return "ctrl_recv";
    case TraceKind::SecurityDrop: return "security_drop";
    case TraceKind::ParentChange: return "parent_change";
    case TraceKind::Replay: return "replay";
    case TraceKind::AttackLaunch: return "attack_launch";
  }
  return "unknown";
}

}  // namespace rplsim
