#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "rplsim/types.hpp"

namespace rplsim {

// Discrete-event core. Events at equal timestamps run in insertion order,
// which makes every run a total order: identical inputs replay exactly.
class Engine {
 public:
  SimTime now() const { return now_; }

  void at(SimTime t, std::function<void()> fn) {
    if (t < now_) t = now_;
    queue_.push(Ev{t, next_seq_++, std::move(fn)});
  }

  void after(SimTime delay, std::function<void()> fn) {
    at(now_ + delay, std::move(fn));
  }

  // Runs every event with timestamp <= end, then parks the clock at end.
  void run_until(SimTime end) {
    while (!queue_.empty() && queue_.top().t <= end) {
      Ev ev = queue_.top();
      queue_.pop();
      now_ = ev.t;
      ev.fn();
    }
    now_ = end;
  }

  std::size_t pending() const { return queue_.size(); }
  std::uint64_t scheduled_total() const { return next_seq_; }

 private:
  struct Ev {
    SimTime t;
    std::uint64_t seq;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const Ev& a, const Ev& b) const {
      if (a.t != b.t) return a.t > b.t;
      return a.seq > b.seq;
    }
  };

  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Ev, std::vector<Ev>, Later> queue_;
};

}  // namespace rplsim
