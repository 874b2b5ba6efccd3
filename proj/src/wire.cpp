#include "rplsim/wire.hpp"

#include <cstring>

namespace rplsim {

namespace {

constexpr std::uint8_t kSecureMarker = 0x5E;

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) {
  out.push_back(v);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void put_i64(std::vector<std::uint8_t>& out, std::int64_t v) {
  auto u = static_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
  }
}

struct Reader {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
  bool failed = false;

  bool need(std::size_t n) {
    if (pos + n > bytes.size()) {
      failed = true;
      return false;
    }
    return true;
  }
  std::uint8_t u8() {
    if (!need(1)) return 0;
    return bytes[pos++];
  }
  std::uint16_t u16() {
    if (!need(2)) return 0;
    std::uint16_t v = static_cast<std::uint16_t>(bytes[pos]) |
                      static_cast<std::uint16_t>(bytes[pos + 1]) << 8;
    pos += 2;
    return v;
  }
  std::uint32_t u32() {
    if (!need(4)) return 0;
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
    }
    pos += 4;
    return v;
  }
  std::int64_t i64() {
    if (!need(8)) return 0;
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
    }
    pos += 8;
    return static_cast<std::int64_t>(v);
  }
};

std::vector<std::uint8_t> encode_body(const Message& m, const WireSizes& sizes) {
  std::vector<std::uint8_t> out;
  out.reserve(sizes.nominal(m.kind()));
  put_u8(out, static_cast<std::uint8_t>(m.kind()));
  put_u16(out, m.sender);
  put_u16(out, m.dest);
  std::visit(
      [&out](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, DisBody>) {
          // no payload
        } else if constexpr (std::is_same_v<T, DioBody>) {
          put_u16(out, b.dodag_root);
          put_u8(out, b.version);
          put_u16(out, b.rank);
        } else if constexpr (std::is_same_v<T, DaoBody>) {
          put_u8(out, b.seq);
          put_u8(out, b.ack_request ? 1 : 0);
          put_u8(out, static_cast<std::uint8_t>(b.targets.size()));
          for (NodeId t : b.targets) put_u16(out, t);
        } else if constexpr (std::is_same_v<T, DaoAckBody>) {
          put_u8(out, b.seq);
          put_u8(out, b.status);
        } else if constexpr (std::is_same_v<T, CcBody>) {
          put_u8(out, b.is_response ? 1 : 0);
          put_u32(out, b.nonce);
          put_u32(out, b.counter_echo);
        } else if constexpr (std::is_same_v<T, DataBody>) {
          put_u16(out, b.origin);
          put_u32(out, b.seq);
          put_i64(out, b.created_at_us);
          put_u8(out, b.ttl);
          put_u8(out, b.hops);
        }
      },
      m.body);
  std::size_t nominal = sizes.nominal(m.kind());
  if (out.size() < nominal) out.resize(nominal, 0);
  return out;
}

}  // namespace

std::size_t WireSizes::nominal(MsgKind k) const {
  switch (k) {
    case MsgKind::Dis:
      return dis;
    case MsgKind::Dio:
      return dio;
    case MsgKind::Dao:
      return dao;
    case MsgKind::DaoAck:
      return dao_ack;
    case MsgKind::Cc:
      return cc;
    case MsgKind::Data:
      return data;
  }
  return 0;
}

MsgKind Message::kind() const {
  struct Visitor {
    MsgKind operator()(const DisBody&) const { return MsgKind::Dis; }
    MsgKind operator()(const DioBody&) const { return MsgKind::Dio; }
    MsgKind operator()(const DaoBody&) const { return MsgKind::Dao; }
    MsgKind operator()(const DaoAckBody&) const { return MsgKind::DaoAck; }
    MsgKind operator()(const CcBody&) const { return MsgKind::Cc; }
    MsgKind operator()(const DataBody&) const { return MsgKind::Data; }
  };
  return std::visit(Visitor{}, body);
}

Message make_dis(NodeId sender, NodeId dest) {
  return Message{sender, dest, DisBody{}};
}

Message make_dio(NodeId sender, NodeId root, std::uint8_t version, Rank rank) {
  return Message{sender, kInvalidNode, DioBody{root, version, rank}};
}

Message make_dao(NodeId sender, NodeId dest, std::uint8_t seq,
                 std::vector<NodeId> targets) {
  return Message{sender, dest, DaoBody{seq, true, std::move(targets)}};
}

Message make_dao_ack(NodeId sender, NodeId dest, std::uint8_t seq) {
  return Message{sender, dest, DaoAckBody{seq, 0}};
}

Message make_cc_request(NodeId sender, NodeId dest, std::uint32_t nonce) {
  return Message{sender, dest, CcBody{false, nonce, 0}};
}

Message make_cc_response(NodeId sender, NodeId dest, std::uint32_t nonce,
                         std::uint32_t counter_echo) {
  return Message{sender, dest, CcBody{true, nonce, counter_echo}};
}

Message make_data(NodeId sender, NodeId dest, NodeId origin, std::uint32_t seq,
                  SimTime created_at_us) {
  return Message{sender, dest, DataBody{origin, seq, created_at_us, 64, 0}};
}

const char* to_string(WireError e) {
  switch (e) {
    case WireError::Empty:
      return "empty frame";
    case WireError::Truncated:
      return "truncated frame";
    case WireError::UnknownKind:
      return "unknown frame kind";
    case WireError::BadLength:
      return "bad frame length";
    case WireError::CcRequiresSecure:
      return "consistency check requires secure framing";
  }
  return "unknown error";
}

EncodeResult encode_plain(const Message& m, const WireSizes& sizes) {
  if (m.kind() == MsgKind::Cc) {
    return EncodeResult{{}, WireError::CcRequiresSecure};
  }
  return EncodeResult{encode_body(m, sizes), std::nullopt};
}

std::vector<std::uint8_t> encode_inner(const Message& m,
                                       const WireSizes& sizes) {
  return encode_body(m, sizes);
}

DecodeResult decode_frame(std::span<const std::uint8_t> bytes) {
  DecodeResult res;
  if (bytes.empty()) {
    res.error = WireError::Empty;
    return res;
  }
  Reader r{bytes};
  std::uint8_t tag = r.u8();
  MsgKind kind;
  switch (tag) {
    case static_cast<std::uint8_t>(MsgKind::Dis):
      kind = MsgKind::Dis;
      break;
    case static_cast<std::uint8_t>(MsgKind::Dio):
      kind = MsgKind::Dio;
      break;
    case static_cast<std::uint8_t>(MsgKind::Dao):
      kind = MsgKind::Dao;
      break;
    case static_cast<std::uint8_t>(MsgKind::DaoAck):
      kind = MsgKind::DaoAck;
      break;
    case static_cast<std::uint8_t>(MsgKind::Cc):
      kind = MsgKind::Cc;
      break;
    case static_cast<std::uint8_t>(MsgKind::Data):
      kind = MsgKind::Data;
      break;
    default:
      res.error = WireError::UnknownKind;
      return res;
  }
  res.msg.sender = r.u16();
  res.msg.dest = r.u16();
  switch (kind) {
    case MsgKind::Dis:
      res.msg.body = DisBody{};
      break;
    case MsgKind::Dio: {
      DioBody b;
      b.dodag_root = r.u16();
      b.version = r.u8();
      b.rank = r.u16();
      res.msg.body = b;
      break;
    }
    case MsgKind::Dao: {
      DaoBody b;
      b.seq = r.u8();
      b.ack_request = r.u8() != 0;
      std::uint8_t n = r.u8();
      b.targets.reserve(n);
      for (std::uint8_t i = 0; i < n; ++i) b.targets.push_back(r.u16());
      res.msg.body = std::move(b);
      break;
    }
    case MsgKind::DaoAck: {
      DaoAckBody b;
      b.seq = r.u8();
      b.status = r.u8();
      res.msg.body = b;
      break;
    }
    case MsgKind::Cc: {
      CcBody b;
      b.is_response = r.u8() != 0;
      b.nonce = r.u32();
      b.counter_echo = r.u32();
      res.msg.body = b;
      break;
    }
    case MsgKind::Data: {
      DataBody b;
      b.origin = r.u16();
      b.seq = r.u32();
      b.created_at_us = r.i64();
      b.ttl = r.u8();
      b.hops = r.u8();
      res.msg.body = b;
      break;
    }
  }
  if (r.failed) {
    res.error = WireError::Truncated;
    return res;
  }
  return res;
}

bool is_secure_frame(std::span<const std::uint8_t> bytes) {
  return !bytes.empty() && bytes[0] == kSecureMarker;
}

std::optional<MsgKind> peek_plain_kind(std::span<const std::uint8_t> bytes) {
  if (bytes.empty() || is_secure_frame(bytes)) return std::nullopt;
  DecodeResult r = decode_frame(bytes);
  if (!r.ok()) return std::nullopt;
  return r.msg.kind();
}

}  // namespace rplsim
