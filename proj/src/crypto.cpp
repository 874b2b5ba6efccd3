#include "rplsim/crypto.hpp"

#include <algorithm>
#include <cstring>

namespace rplsim {

namespace {

constexpr std::uint8_t kSecureMarker = 0x5E;

inline std::uint64_t rotl64(std::uint64_t x, int b) {
  return (x << b) | (x >> (64 - b));
}

inline std::uint64_t load_u64_le(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

// Domain-separation prefixes so the tag and the keystream never collide
// even though both derive from the same key.
constexpr std::uint8_t kDomainMac = 0x01;
constexpr std::uint8_t kDomainStream = 0x02;

std::uint64_t keystream_block(const Key& key, NodeId sender,
                              std::uint32_t counter, std::uint32_t block) {
  std::uint8_t buf[11];
  buf[0] = kDomainStream;
  buf[1] = static_cast<std::uint8_t>(sender & 0xFF);
  buf[2] = static_cast<std::uint8_t>(sender >> 8);
  for (int i = 0; i < 4; ++i)
    buf[3 + i] = static_cast<std::uint8_t>(counter >> (8 * i));
  for (int i = 0; i < 4; ++i)
    buf[7 + i] = static_cast<std::uint8_t>(block >> (8 * i));
  return siphash24(key, std::span<const std::uint8_t>(buf, sizeof buf));
}

void xor_keystream(const Key& key, NodeId sender, std::uint32_t counter,
                   std::uint8_t* data, std::size_t len) {
  for (std::size_t off = 0; off < len; off += 8) {
    std::uint64_t ks =
        keystream_block(key, sender, counter, static_cast<std::uint32_t>(off / 8));
    std::size_t chunk = std::min<std::size_t>(8, len - off);
    for (std::size_t i = 0; i < chunk; ++i) {
      data[off + i] ^= static_cast<std::uint8_t>(ks >> (8 * i));
    }
  }
}

std::array<std::uint8_t, kSecureHeaderLen> encode_header(
    const SecureHeader& hdr) {
  std::array<std::uint8_t, kSecureHeaderLen> out{};
  out[0] = kSecureMarker;
  out[1] = static_cast<std::uint8_t>(
      (static_cast<std::uint8_t>(hdr.level) << 4) | (hdr.key_id & 0x0F));
  out[2] = static_cast<std::uint8_t>(hdr.sender & 0xFF);
  out[3] = static_cast<std::uint8_t>(hdr.sender >> 8);
  for (int i = 0; i < 4; ++i)
    out[4 + i] = static_cast<std::uint8_t>(hdr.counter >> (8 * i));
  return out;
}

std::uint64_t compute_tag(const Key& key,
                          std::span<const std::uint8_t> header,
                          std::span<const std::uint8_t> plain) {
  std::vector<std::uint8_t> buf;
  buf.reserve(1 + header.size() + plain.size());
  buf.push_back(kDomainMac);
  buf.insert(buf.end(), header.begin(), header.end());
  buf.insert(buf.end(), plain.begin(), plain.end());
  return siphash24(key, buf);
}

}  // namespace

std::uint64_t siphash24(const Key& key, std::span<const std::uint8_t> data) {
  std::uint64_t k0 = load_u64_le(key.data());
  std::uint64_t k1 = load_u64_le(key.data() + 8);
  std::uint64_t v0 = 0x736f6d6570736575ULL ^ k0;
  std::uint64_t v1 = 0x646f72616e646f6dULL ^ k1;
  std::uint64_t v2 = 0x6c7967656e657261ULL ^ k0;
  std::uint64_t v3 = 0x7465646279746573ULL ^ k1;

  auto sipround = [&] {
    v0 += v1;
    v1 = rotl64(v1, 13);
    v1 ^= v0;
    v0 = rotl64(v0, 32);
    v2 += v3;
    v3 = rotl64(v3, 16);
    v3 ^= v2;
    v0 += v3;
    v3 = rotl64(v3, 21);
    v3 ^= v0;
    v2 += v1;
    v1 = rotl64(v1, 17);
    v1 ^= v2;
    v2 = rotl64(v2, 32);
  };

  const std::size_t len = data.size();
  const std::size_t end = len - (len % 8);
  for (std::size_t i = 0; i < end; i += 8) {
    std::uint64_t m = load_u64_le(data.data() + i);
    v3 ^= m;
    sipround();
    sipround();
    v0 ^= m;
  }
  std::uint64_t b = static_cast<std::uint64_t>(len & 0xFF) << 56;
  for (std::size_t i = end; i < len; ++i) {
    b |= static_cast<std::uint64_t>(data[i]) << (8 * (i - end));
  }
  v3 ^= b;
  sipround();
  sipround();
  v0 ^= b;
  v2 ^= 0xFF;
  sipround();
  sipround();
  sipround();
  sipround();
  return v0 ^ v1 ^ v2 ^ v3;
}

std::optional<Key> key_from_hex(const std::string& hex) {
  if (hex.size() != 32) return std::nullopt;
  Key key{};
  for (std::size_t i = 0; i < 16; ++i) {
    auto nib = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    int hi = nib(hex[2 * i]);
    int lo = nib(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    key[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return key;
}

std::string key_to_hex(const Key& key) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(32);
  for (std::uint8_t b : key) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0x0F]);
  }
  return out;
}

std::vector<std::uint8_t> seal_frame(const Key& key, const SecureHeader& hdr,
                                     std::span<const std::uint8_t> plain) {
  auto header = encode_header(hdr);
  std::uint64_t tag = compute_tag(key, header, plain);

  std::vector<std::uint8_t> frame;
  frame.reserve(kSecureOverhead + plain.size());
  frame.insert(frame.end(), header.begin(), header.end());
  frame.insert(frame.end(), plain.begin(), plain.end());
  if (hdr.level == SecLevel::EncMac && !plain.empty()) {
    xor_keystream(key, hdr.sender, hdr.counter,
                  frame.data() + kSecureHeaderLen, plain.size());
  }
  for (int i = 0; i < 8; ++i) {
    frame.push_back(static_cast<std::uint8_t>(tag >> (8 * i)));
  }
  return frame;
}

std::optional<SecureHeader> peek_secure_header(
    std::span<const std::uint8_t> frame) {
  if (frame.size() < kSecureOverhead || frame[0] != kSecureMarker) {
    return std::nullopt;
  }
  SecureHeader hdr;
  std::uint8_t lv = frame[1] >> 4;
  if (lv > 1) return std::nullopt;
  hdr.level = static_cast<SecLevel>(lv);
  hdr.key_id = frame[1] & 0x0F;
  hdr.sender = static_cast<NodeId>(frame[2]) |
               static_cast<NodeId>(frame[3]) << 8;
  hdr.counter = 0;
  for (int i = 0; i < 4; ++i) {
    hdr.counter |= static_cast<std::uint32_t>(frame[4 + i]) << (8 * i);
  }
  return hdr;
}

std::optional<std::vector<std::uint8_t>> open_frame(
    const Key& key, std::span<const std::uint8_t> frame) {
  auto hdr = peek_secure_header(frame);
  if (!hdr) return std::nullopt;
  std::size_t body_len = frame.size() - kSecureOverhead;
  std::vector<std::uint8_t> plain(frame.begin() + kSecureHeaderLen,
                                  frame.begin() + kSecureHeaderLen + body_len);
  if (hdr->level == SecLevel::EncMac && !plain.empty()) {
    xor_keystream(key, hdr->sender, hdr->counter, plain.data(), plain.size());
  }
  std::uint64_t expect =
      compute_tag(key, frame.first(kSecureHeaderLen), plain);
  std::uint64_t got = 0;
  const std::uint8_t* tag = frame.data() + frame.size() - kSecureMacLen;
  for (int i = 0; i < 8; ++i) {
    got |= static_cast<std::uint64_t>(tag[i]) << (8 * i);
  }
  if (got != expect) return std::nullopt;
  return plain;
}

}  // namespace rplsim
