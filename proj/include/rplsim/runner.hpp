#pragma once

#include <functional>

#include "rplsim/config.hpp"
#include "rplsim/metrics.hpp"
#include "rplsim/trace.hpp"

namespace rplsim {

// Runs every round of a scenario and collects per-round metrics. The
// optional callback sees each finished round's trace (for dumping or
// invariant checks) before it is discarded.
using RoundCallback =
    std::function<void(int round, const Trace& trace, const RoundMetrics& m)>;

ExperimentResult run_experiment(const ScenarioConfig& cfg,
                                const RoundCallback& per_round = nullptr);

}  // namespace rplsim
