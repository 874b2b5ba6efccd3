#include "rplsim/rng.hpp"

namespace rplsim {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) {
  return (v << k) | (v >> (64 - k));
}

}  // namespace

void Rng::reseed(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& w : s_) w = splitmix64(sm);
  // xoshiro must not start from the all-zero state.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::next_double() {
  // 53 high bits -> [0,1) with full double granularity.
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::next_range(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return next_u64();  // full 2^64 range
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return lo + v % span;
}

double Rng::next_real(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

bool Rng::next_bool(double p_true) {
  if (p_true <= 0.0) return false;
  if (p_true >= 1.0) return true;
  return next_double() < p_true;
}

std::uint64_t hash_tag(std::string_view tag) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

Rng derive_rng(std::uint64_t master_seed, std::uint32_t round,
               NodeId node, std::string_view purpose) {
  // Mix the coordinates through splitmix-style avalanche steps so adjacent
  // (round, node) pairs land in unrelated streams.
  std::uint64_t x = master_seed;
  x ^= 0x5851F42D4C957F2Dull * (static_cast<std::uint64_t>(round) + 1);
  x ^= 0x14057B7EF767814Full * (static_cast<std::uint64_t>(node) + 1);
  x ^= hash_tag(purpose);
  std::uint64_t sm = x;
  std::uint64_t mixed = splitmix64(sm);
  mixed ^= splitmix64(sm);
  return Rng(mixed);
}

}  // namespace rplsim
