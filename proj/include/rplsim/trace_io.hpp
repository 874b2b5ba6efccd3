#pragma once

#include <iosfwd>
#include <string>

#include "rplsim/config.hpp"
#include "rplsim/trace.hpp"

namespace rplsim {

// One JSON object per line: a leading meta record (mode, adversary, sink,
// launch time), then events, snapshots, and per-node energy ledgers.
void write_trace_jsonl(const Trace& trace, const ScenarioConfig& cfg,
                       std::ostream& out);
void write_trace_jsonl(const Trace& trace, const ScenarioConfig& cfg,
                       const std::string& path);

struct LoadedTrace {
  Trace trace;
  // Reconstructed just far enough for offline invariant checking.
  ScenarioConfig cfg;
};

LoadedTrace read_trace_jsonl(std::istream& in);
LoadedTrace read_trace_jsonl(const std::string& path);

}  // namespace rplsim
