#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rplsim/types.hpp"

namespace rplsim {

// Nominal frame sizes in bytes. Encoded frames are padded up to the nominal
// size for their kind so that energy accounting, transmission delay, and
// verbatim replay all agree on one number. A frame whose semantic content
// exceeds the nominal size (e.g. a route advertisement with many prefixes)
// is emitted at its natural size instead.
struct WireSizes {
  std::size_t dis = 8;
  std::size_t dio = 76;
  std::size_t dao = 24;
  std::size_t dao_ack = 8;
  std::size_t cc = 76;
  std::size_t data = 192;
  // Secure envelope framing: unencrypted header + truncated tag.
  std::size_t sec_header = 8;
  std::size_t sec_mac = 8;

  std::size_t nominal(MsgKind k) const;
  std::size_t secure_overhead() const { return sec_header + sec_mac; }
};

struct DisBody {
  bool operator==(const DisBody&) const = default;
};

struct DioBody {
  NodeId dodag_root = kInvalidNode;
  std::uint8_t version = 1;
  Rank rank = kInfiniteRank;
  bool operator==(const DioBody&) const = default;
};

struct DaoBody {
  std::uint8_t seq = 0;
  bool ack_request = true;
  std::vector<NodeId> targets;  // prefixes reachable via the sender
  bool operator==(const DaoBody&) const = default;
};

struct DaoAckBody {
  std::uint8_t seq = 0;
  std::uint8_t status = 0;  // 0 = accepted
  bool operator==(const DaoAckBody&) const = default;
};

// Consistency-check challenge/response. Only ever sent inside a secure
// envelope; constructing a plain frame from it is rejected.
struct CcBody {
  bool is_response = false;
  std::uint32_t nonce = 0;
  std::uint32_t counter_echo = 0;  // responder's current send counter
  bool operator==(const CcBody&) const = default;
};

struct DataBody {
  NodeId origin = kInvalidNode;
  std::uint32_t seq = 0;
  SimTime created_at_us = 0;
  std::uint8_t ttl = 64;
  std::uint8_t hops = 0;
  bool operator==(const DataBody&) const = default;
};

using MsgBody =
    std::variant<DisBody, DioBody, DaoBody, DaoAckBody, CcBody, DataBody>;

struct Message {
  NodeId sender = kInvalidNode;  // the node whose stack produced the message
  NodeId dest = kInvalidNode;    // 0 = multicast
  MsgBody body;

  MsgKind kind() const;
  bool is_multicast() const { return dest == kInvalidNode; }
  bool operator==(const Message&) const = default;
};

Message make_dis(NodeId sender, NodeId dest);
Message make_dio(NodeId sender, NodeId root, std::uint8_t version, Rank rank);
Message make_dao(NodeId sender, NodeId dest, std::uint8_t seq,
                 std::vector<NodeId> targets);
Message make_dao_ack(NodeId sender, NodeId dest, std::uint8_t seq);
Message make_cc_request(NodeId sender, NodeId dest, std::uint32_t nonce);
Message make_cc_response(NodeId sender, NodeId dest, std::uint32_t nonce,
                         std::uint32_t counter_echo);
Message make_data(NodeId sender, NodeId dest, NodeId origin, std::uint32_t seq,
                  SimTime created_at_us);

enum class WireError {
  Empty,
  Truncated,
  UnknownKind,
  BadLength,
  CcRequiresSecure,  // plain framing of a consistency check is forbidden
};

const char* to_string(WireError e);

struct EncodeResult {
  std::vector<std::uint8_t> bytes;
  std::optional<WireError> error;
  bool ok() const { return !error.has_value(); }
};

struct DecodeResult {
  Message msg;
  std::optional<WireError> error;
  bool ok() const { return !error.has_value(); }
};

// Encodes the message body (no security framing), padded to the nominal
// size. Total on well-formed input except plain consistency checks.
EncodeResult encode_plain(const Message& m, const WireSizes& sizes);

// Encoding used inside secure envelopes: same layout, no plain-CC
// restriction.
std::vector<std::uint8_t> encode_inner(const Message& m,
                                       const WireSizes& sizes);

// Parses a plain (or decrypted inner) frame. Never crashes on garbage.
DecodeResult decode_frame(std::span<const std::uint8_t> bytes);

// True if the frame starts with the secure-envelope marker.
bool is_secure_frame(std::span<const std::uint8_t> bytes);

// Kind of a plain frame, if it parses as one. Secure frames hide their
// kind inside the ciphertext and return nullopt.
std::optional<MsgKind> peek_plain_kind(std::span<const std::uint8_t> bytes);

}  // namespace rplsim
