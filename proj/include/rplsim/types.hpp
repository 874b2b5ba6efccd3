#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace rplsim {

// Node identifiers are dense small integers; 0 is reserved as "invalid"
// and doubles as the multicast destination on the wire.
using NodeId = std::uint16_t;
constexpr NodeId kInvalidNode = 0;

// Simulated time in integer microseconds. Signed so durations subtract
// safely; 2^63 us is ~292k years, far beyond any run.
using SimTime = std::int64_t;

constexpr SimTime us_from_ms(std::int64_t ms) { return ms * 1000; }
constexpr SimTime us_from_s(std::int64_t s) { return s * 1000000; }
constexpr double ms_from_us(SimTime us) { return static_cast<double>(us) / 1e3; }
constexpr double s_from_us(SimTime us) { return static_cast<double>(us) / 1e6; }

// Routing rank. The objective function uses a fixed per-hop increment, so
// rank/256 is hop depth; 0xFFFF marks a node with no route to the root.
using Rank = std::uint16_t;
constexpr Rank kInfiniteRank = 0xFFFF;
constexpr Rank kMinHopRankIncrease = 256;
constexpr Rank kRootRank = 256;

enum class MsgKind : std::uint8_t {
  Dis = 0x00,
  Dio = 0x01,
  Dao = 0x02,
  DaoAck = 0x03,
  Cc = 0x8A,    // consistency check challenge/response
  Data = 0xF0,  // application payload
};

const char* to_string(MsgKind k);

enum class SecurityMode : std::uint8_t {
  Unsecured = 0,        // plain control frames
  Preinstalled = 1,     // secure envelope, counters tracked but not enforced
  PreinstalledRp = 2,   // secure envelope + replay protection via CC
};

const char* to_string(SecurityMode m);

enum class AttackKind : std::uint8_t {
  None = 0,
  Blackhole = 1,
  SelectiveForward = 2,
  NeighborReplay = 3,
};

const char* to_string(AttackKind a);

enum class AdversaryPlacement : std::uint8_t {
  Insider = 0,   // keyed member of the network
  External = 1,  // unkeyed device within radio range
};

const char* to_string(AdversaryPlacement p);

enum class DropReason : std::uint8_t {
  None = 0,
  NoRoute = 1,        // holder had no preferred parent
  AttackerDrop = 2,   // discarded by a launched attack behavior
  SecurityReject = 3, // failed authentication / replay policy
  QueueTimeout = 4,   // retained past its useful lifetime
  Loop = 5,           // TTL exhausted or returned to its origin
  RadioVoid = 6,      // unicast to a node outside radio range
};

const char* to_string(DropReason r);

struct Position {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Position&) const = default;
};

inline double distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace rplsim
