#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rplsim/types.hpp"

namespace rplsim {

using Key = std::array<std::uint8_t, 16>;

// SipHash-2-4 with the standard 128-bit key, 64-bit tag.
std::uint64_t siphash24(const Key& key, std::span<const std::uint8_t> data);

std::optional<Key> key_from_hex(const std::string& hex);
std::string key_to_hex(const Key& key);

enum class SecLevel : std::uint8_t {
  MacOnly = 0,
  EncMac = 1,
};

// Unencrypted header of a secure frame. The sender and counter double as
// the cipher nonce, so tampering with either breaks both the tag and the
// decryption.
struct SecureHeader {
  SecLevel level = SecLevel::EncMac;
  std::uint8_t key_id = 0;
  NodeId sender = kInvalidNode;
  std::uint32_t counter = 0;
};

constexpr std::size_t kSecureHeaderLen = 8;
constexpr std::size_t kSecureMacLen = 8;
constexpr std::size_t kSecureOverhead = kSecureHeaderLen + kSecureMacLen;

// [0x5E][level<<4|key_id][sender u16 le][counter u32 le] + body + tag.
// EncMac keeps the body length; MacOnly leaves it in the clear.
std::vector<std::uint8_t> seal_frame(const Key& key, const SecureHeader& hdr,
                                     std::span<const std::uint8_t> plain);

// Header fields readable without the key (frame must be long enough).
std::optional<SecureHeader> peek_secure_header(
    std::span<const std::uint8_t> frame);

// Verifies the tag and recovers the inner frame. nullopt on any mismatch:
// wrong key, truncation, or a flipped bit anywhere in the frame.
std::optional<std::vector<std::uint8_t>> open_frame(
    const Key& key, std::span<const std::uint8_t> frame);

}  // namespace rplsim
