#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "rplsim/crypto.hpp"
#include "rplsim/node.hpp"
#include "rplsim/simnet.hpp"
#include "rplsim/wire.hpp"
#include "test_helpers.hpp"

using namespace rplsim;
using namespace rplsim::testing;

namespace {

// Seals an inner control message exactly as a keyed stack would.
std::vector<std::uint8_t> sealed(const ScenarioConfig& cfg, const Message& m,
                                 std::uint32_t counter) {
  auto key = key_from_hex(cfg.key_hex);
  REQUIRE(key.has_value());
  SecureHeader hdr;
  hdr.level = SecLevel::EncMac;
  hdr.key_id = 0;
  hdr.sender = m.sender;
  hdr.counter = counter;
  return seal_frame(*key, hdr, encode_inner(m, cfg.sizes));
}

long accepted_dios_from(const Trace& trace, NodeId receiver, NodeId sender,
                        std::uint32_t counter) {
  long n = 0;
  for (const auto& ev : trace.events) {
    if (ev.kind == TraceKind::CtrlRecv && ev.node == receiver &&
        ev.peer == sender && ev.msg == MsgKind::Dio && ev.seq == counter) {
      ++n;
    }
  }
  return n;
}

long cc_sends(const Trace& trace, NodeId node) {
  long n = 0;
  for (const auto& ev : filter(trace, TraceKind::CtrlSend, node)) {
    if (ev.msg == MsgKind::Cc) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("replayed frame: accepted twice without protection, once with") {
  // Inject the same genuinely-keyed beacon twice, before the sender's own
  // stack has said anything. The unprotected mode processes both copies;
  // the protected mode verifies liveness first and accepts exactly one.
  auto run_mode = [](SecurityMode mode) {
    ScenarioConfig cfg = make_line(2, 60.0, mode);
    SimNet net(cfg, 0);
    net.start();
    net.run_until(us_from_ms(1500));  // booted; no beacons exchanged yet

    Message dio = make_dio(1, 1, 1, 256);
    auto frame = sealed(cfg, dio, /*counter=*/1);
    net.transmit(1, 2, frame);
    net.run_until(net.now() + us_from_s(5));
    net.transmit(1, 2, frame);  // byte-identical replay
    net.run_until(net.now() + us_from_s(5));
    return net.take_trace();
  };

  Trace psm = run_mode(SecurityMode::Preinstalled);
  CHECK(accepted_dios_from(psm, 2, 1, 1) == 2);  // the replay gap
  CHECK(cc_sends(psm, 2) == 0);                  // and no challenges at all

  Trace rp = run_mode(SecurityMode::PreinstalledRp);
  CHECK(accepted_dios_from(rp, 2, 1, 1) == 1);  // exactly one acceptance
  CHECK(cc_sends(rp, 2) >= 2);  // first-contact challenge + replay challenge
  bool replay_rejected = false;
  for (const auto& ev : filter(rp, TraceKind::SecurityDrop, 2)) {
    if (ev.peer == 1) replay_rejected = true;
  }
  CHECK(replay_rejected);
}

TEST_CASE("first contact is verified before processing") {
  ScenarioConfig cfg = make_line(2, 60.0, SecurityMode::PreinstalledRp);
  SimNet net(cfg, 0);
  net.start();
  net.run_until(us_from_ms(1500));

  Message dio = make_dio(1, 1, 1, 256);
  net.transmit(1, 2, sealed(cfg, dio, 1));

  // After one radio flight the frame has arrived and the challenge is out,
  // but the challenge round-trip needs two more flights: nothing can have
  // been accepted yet.
  net.run_until(net.now() + us_from_ms(5));
  CHECK(accepted_dios_from(net.trace(), 2, 1, 1) == 0);
  CHECK(net.node(2).stats().challenges_issued == 1);

  net.run_until(net.now() + us_from_s(5));
  CHECK(accepted_dios_from(net.trace(), 2, 1, 1) == 1);
  CHECK(net.node(2).stats().quarantine_released == 1);
  CHECK(net.node(2).joined());  // the released beacon was processed
  CHECK(net.node(2).preferred_parent() == 1);
}

TEST_CASE("a challenge nobody answers expires and drops the quarantined frame") {
  ScenarioConfig cfg = make_line(2, 60.0, SecurityMode::PreinstalledRp);
  SimNet net(cfg, 0);
  net.start();
  net.run_until(us_from_ms(1500));

  // Claimed sender 77 does not exist; the challenge can never verify.
  Message dio = make_dio(77, 1, 1, 256);
  net.transmit(1, 2, sealed(cfg, dio, 5));
  net.run_until(net.now() + us_from_ms(5));
  CHECK(net.node(2).stats().challenges_issued == 1);

  // Initial challenge + every reissue toward the ghost, then expiry. (The
  // real root shows up later and runs its own, answerable, exchange — so
  // count only frames addressed to the ghost.)
  net.run_until(net.now() +
                cfg.timeouts.cc_timeout * (cfg.timeouts.cc_max_reissues + 2));
  long to_ghost = 0;
  for (const auto& ev : filter(net.trace(), TraceKind::CtrlSend, 2)) {
    if (ev.msg == MsgKind::Cc && ev.peer == 77) ++to_ghost;
  }
  CHECK(to_ghost == 1 + cfg.timeouts.cc_max_reissues);
  CHECK(net.node(2).stats().quarantine_expired == 1);
  CHECK(accepted_dios_from(net.trace(), 2, 77, 5) == 0);
}

TEST_CASE("suspects from a peer with a pending challenge are coalesced") {
  ScenarioConfig cfg = make_line(2, 60.0, SecurityMode::PreinstalledRp);
  SimNet net(cfg, 0);
  net.start();
  net.run_until(us_from_ms(1500));

  Message dio = make_dio(77, 1, 1, 256);
  net.transmit(1, 2, sealed(cfg, dio, 5));
  net.run_until(net.now() + us_from_ms(100));
  net.transmit(1, 2, sealed(cfg, dio, 6));
  net.transmit(1, 2, sealed(cfg, dio, 7));
  net.run_until(net.now() + us_from_ms(100));

  // One challenge in flight; the extra suspects were discarded, not queued.
  CHECK(net.node(2).stats().challenges_issued == 1);
  CHECK(net.node(2).stats().replay_suspects >= 3);
  CHECK(net.node(2).stats().security_rejects >= 2);
}

TEST_CASE("frames sealed under a different key are rejected outright") {
  ScenarioConfig cfg = make_line(2, 60.0, SecurityMode::PreinstalledRp);
  SimNet net(cfg, 0);
  net.start();
  net.run_until(us_from_ms(1500));

  ScenarioConfig wrong = cfg;
  wrong.key_hex = "ffeeddccbbaa99887766554433221100";
  Message dio = make_dio(1, 1, 1, 256);
  net.transmit(1, 2, sealed(wrong, dio, 1));
  net.run_until(net.now() + us_from_s(2));

  CHECK(net.node(2).stats().security_rejects == 1);
  // Unverifiable garbage earns no challenge and changes no routing state.
  CHECK(net.node(2).stats().challenges_issued == 0);
  CHECK(accepted_dios_from(net.trace(), 2, 1, 1) == 0);
  CHECK(!net.node(2).joined());
}

TEST_CASE("secured stacks ignore plaintext control frames") {
  for (SecurityMode mode :
       {SecurityMode::Preinstalled, SecurityMode::PreinstalledRp}) {
    ScenarioConfig cfg = make_line(2, 60.0, mode);
    SimNet net(cfg, 0);
    net.start();
    net.run_until(us_from_ms(1500));

    EncodeResult er = encode_plain(make_dio(1, 1, 1, 256), cfg.sizes);
    REQUIRE(er.ok());
    net.transmit(1, 2, er.bytes);
    net.run_until(net.now() + us_from_s(2));

    CHECK(!net.node(2).joined());
    CHECK(net.node(2).stats().security_rejects == 1);
    CHECK(net.node(2).stats().ctrl_received == 0);
  }
}

TEST_CASE("protected formation converges and then stays quiet") {
  ScenarioConfig cfg = make_line(4, 60.0, SecurityMode::PreinstalledRp);
  cfg.round_duration = us_from_s(400);
  SimNet net(cfg, 0);
  net.run();
  // Everyone joined despite every first contact being challenged.
  CHECK(net.node(2).joined());
  CHECK(net.node(3).joined());
  CHECK(net.node(4).joined());
  CHECK(net.node(4).rank() == 1024);
  // Challenges happened during formation.
  long cc_total = 0;
  for (const auto& ev : filter(net.trace(), TraceKind::CtrlSend)) {
    if (ev.msg == MsgKind::Cc) ++cc_total;
  }
  CHECK(cc_total > 0);
  // But with honest peers every quarantine resolved by verification.
  for (NodeId id : {NodeId{2}, NodeId{3}, NodeId{4}}) {
    CHECK(net.node(id).stats().quarantine_expired == 0);
  }
}

TEST_CASE("secure envelope adds exactly the fixed overhead on the air") {
  ScenarioConfig cfg = make_line(2, 60.0, SecurityMode::Preinstalled);
  SimNet net(cfg, 0);
  net.run();
  bool saw_dio = false;
  for (const auto& ev : filter(net.trace(), TraceKind::CtrlSend)) {
    if (ev.msg == MsgKind::Dio) {
      CHECK(ev.bytes == cfg.sizes.dio + cfg.sizes.secure_overhead());
      CHECK(ev.secure);
      saw_dio = true;
    }
  }
  CHECK(saw_dio);
}
