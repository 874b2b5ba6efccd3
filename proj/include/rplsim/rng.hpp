#pragma once

#include <cstdint>
#include <string_view>

#include "rplsim/types.hpp"

namespace rplsim {

// Deterministic, platform-independent pseudo-random stream.
//
// xoshiro256** seeded via splitmix64. Every consumer derives its own stream
// from (seed, round, node, purpose), so adding a draw in one component can
// never shift the values another component sees.
class Rng {
 public:
  Rng() : Rng(0) {}
  explicit Rng(std::uint64_t seed) { reseed(seed); }

  void reseed(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double next_double();

  // Uniform integer in [lo, hi] inclusive. Requires lo <= hi.
  std::uint64_t next_range(std::uint64_t lo, std::uint64_t hi);

  // Uniform real in [lo, hi).
  double next_real(double lo, double hi);

  bool next_bool(double p_true);

 private:
  std::uint64_t s_[4] = {};
};

// Stable 64-bit hash of an arbitrary string (FNV-1a), for purpose tags.
std::uint64_t hash_tag(std::string_view tag);

// Derives the canonical per-consumer stream. All behavioural randomness in
// the simulator must come through here.
Rng derive_rng(std::uint64_t master_seed, std::uint32_t round,
               NodeId node, std::string_view purpose);

}  // namespace rplsim
