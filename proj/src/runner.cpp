#include "rplsim/runner.hpp"

#include "rplsim/simnet.hpp"

namespace rplsim {

ExperimentResult run_experiment(const ScenarioConfig& cfg,
                                const RoundCallback& per_round) {
  ExperimentResult result;
  result.name = cfg.name;
  result.rounds.reserve(static_cast<std::size_t>(cfg.rounds));
  for (int round = 0; round < cfg.rounds; ++round) {
    SimNet net(cfg, round);
    net.run();
    Trace trace = net.take_trace();
    RoundMetrics m = compute_round_metrics(trace, cfg, round);
    if (per_round) per_round(round, trace, m);
    result.rounds.push_back(std::move(m));
  }
  return result;
}

}  // namespace rplsim
