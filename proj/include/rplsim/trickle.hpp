#pragma once

#include <cstdint>

#include "rplsim/rng.hpp"
#include "rplsim/types.hpp"

namespace rplsim {

struct TrickleConfig {
  SimTime i_min = us_from_s(4);
  int doublings = 3;  // i_max = i_min << doublings
  int redundancy_k = 20;

  SimTime i_max() const { return i_min << doublings; }
};

// Adaptive beacon timer: each interval I picks a fire point uniformly in
// [I/2, I), doubles I up to i_max when quiet, and collapses back to i_min
// on reset. The owner drives it from scheduled events; stale events are
// fenced with the generation counter.
class Trickle {
 public:
  explicit Trickle(const TrickleConfig& cfg) : cfg_(cfg) {}

  void start(SimTime now, Rng& rng) {
    interval_ = cfg_.i_min;
    begin_interval(now, rng);
  }

  void reset(SimTime now, Rng& rng) {
    interval_ = cfg_.i_min;
    begin_interval(now, rng);
  }

  // Call when the current interval expires: doubles and starts the next.
  void advance(SimTime now, Rng& rng) {
    interval_ = std::min<SimTime>(interval_ * 2, cfg_.i_max());
    begin_interval(now, rng);
  }

  void note_consistent() { ++consistent_count_; }

  bool suppressed() const { return consistent_count_ >= cfg_.redundancy_k; }

  SimTime fire_at() const { return fire_at_; }
  SimTime interval_end() const { return interval_end_; }
  SimTime interval() const { return interval_; }
  std::uint64_t generation() const { return generation_; }

 private:
  void begin_interval(SimTime now, Rng& rng) {
    SimTime half = interval_ / 2;
    fire_at_ = now + half +
               static_cast<SimTime>(rng.next_range(
                   0, static_cast<std::uint64_t>(interval_ - half - 1)));
    interval_end_ = now + interval_;
    consistent_count_ = 0;
    ++generation_;
  }

  TrickleConfig cfg_;
  SimTime interval_ = 0;
  SimTime fire_at_ = 0;
  SimTime interval_end_ = 0;
  int consistent_count_ = 0;
  std::uint64_t generation_ = 0;
};

}  // namespace rplsim
