// Acceptance gate for the full evaluation matrix. Runs every experiment x
// scenario cell end to end (twice, to prove determinism), checks per-round
// invariants, and verifies the behavioural envelope the project commits
// to. Prints one [PASS]/[FAIL] line per criterion; exits nonzero if any
// criterion fails. Run from the repository root so scenarios/ resolves.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rplsim/crypto.hpp"
#include "rplsim/metrics.hpp"
#include "rplsim/rng.hpp"
#include "rplsim/runner.hpp"
#include "rplsim/scenario.hpp"
#include "rplsim/stats.hpp"
#include "rplsim/wire.hpp"

using namespace rplsim;

namespace {

// ---- pinned tolerances ----------------------------------------------------
// Baseline stability (A1)
constexpr double kBaselineMinPdr = 0.95;
constexpr double kBaselineMaxPairGap = 0.03;   // absolute PDR points
constexpr double kBaselineMaxWallS = 240.0;    // 4 cells x 10 rounds
// Selective forwarding (A2)
constexpr double kSfPdrLow = 0.65, kSfPdrHigh = 0.75;
// Blackhole (A3)
constexpr double kBhPdrLow = 0.75, kBhPdrHigh = 0.85;
constexpr int kBhMinChildlessRounds = 8;       // of 10
constexpr double kBhReparentLowS = 300.0, kBhReparentHighS = 900.0;
// Replay protection differential (A4)
constexpr double kRpMinPdrGap = 0.10;
constexpr double kRpMaxBlackholeDelta = 0.08;
// Control overhead (A5)
constexpr double kCtrlTolerance = 0.15;        // relative to baseline cell
constexpr double kCtrlMinReplayIncrease = 0.30;
// Energy (A6)
constexpr double kPowerMinReplayIncrease = 0.20;
constexpr double kPowerModeTolerance = 0.10;
// Mechanised checks (A7)
constexpr int kCodecTrials = 10000;
constexpr int kWrongKeyTrials = 1000;
constexpr double kMaxSuiteWallS = 1200.0;
// Statistics oracle (A8)
constexpr double kCiTolerance = 1e-9;

const std::vector<std::string> kExperiments = {"um-i", "psm-i", "psmrp-i",
                                               "psm-e"};
const std::vector<std::string> kScenarios = {"no-attack", "blackhole",
                                             "selective-forward",
                                             "neighbor-replay"};

double now_s() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

struct CellRun {
  ExperimentResult result;
  double wall_s = 0.0;
};

struct MatrixRun {
  std::map<std::string, CellRun> cells;
  std::vector<std::string> violations;
  bool recv_gt_sent_every_round = true;
  std::string summary;  // deterministic serialization of every cell
  double baseline_mode_wall_s = 0.0;  // the four psm-e cells
};

MatrixRun run_matrix() {
  MatrixRun out;
  nlohmann::json summary;
  for (const auto& exp : kExperiments) {
    for (const auto& scen : kScenarios) {
      const std::string name = exp + "-" + scen;
      ScenarioConfig cfg = load_scenario("scenarios/" + name + ".json");
      const double t0 = now_s();
      ExperimentResult res = run_experiment(
          cfg, [&](int round, const Trace& trace, const RoundMetrics& m) {
            for (const auto& v : check_trace(trace, cfg)) {
              out.violations.push_back(name + " round " +
                                       std::to_string(round) + ": " + v);
            }
            if (m.ctrl_received <= m.ctrl_sent) {
              out.recv_gt_sent_every_round = false;
            }
          });
      const double wall = now_s() - t0;
      if (exp == "psm-e") out.baseline_mode_wall_s += wall;

      nlohmann::json cell;
      for (const auto& metric : ExperimentResult::metric_names()) {
        Ci95 ci = res.aggregate(metric);
        cell[metric] = {{"mean", ci.mean},
                        {"half_width", ci.half_width},
                        {"values", res.values(metric)}};
      }
      summary["cells"][name] = std::move(cell);
      out.cells[name] = CellRun{std::move(res), wall};
    }
  }
  out.summary = summary.dump();
  return out;
}

int g_failures = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << " " << detail << "\n";
  if (!ok) ++g_failures;
}

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
  return buf;
}

double cell_mean(const MatrixRun& run, const std::string& cell,
                 const std::string& metric) {
  return run.cells.at(cell).result.aggregate(metric).mean;
}

// ---- randomized codec / cipher trials --------------------------------------

Message random_message(Rng& rng) {
  auto id = [&rng](bool nonzero) {
    return static_cast<NodeId>(rng.next_range(nonzero ? 1 : 0, 0xFFFE));
  };
  switch (rng.next_range(0, 5)) {
    case 0:
      return make_dis(id(true), id(false));
    case 1:
      return make_dio(id(true), id(true),
                      static_cast<std::uint8_t>(rng.next_range(0, 255)),
                      static_cast<Rank>(rng.next_range(0, 0xFFFF)));
    case 2: {
      std::vector<NodeId> targets;
      const int n = static_cast<int>(rng.next_range(0, 12));
      for (int i = 0; i < n; ++i) targets.push_back(id(true));
      return make_dao(id(true), id(true),
                      static_cast<std::uint8_t>(rng.next_range(0, 255)),
                      std::move(targets));
    }
    case 3:
      return make_dao_ack(id(true), id(true),
                          static_cast<std::uint8_t>(rng.next_range(0, 255)));
    case 4:
      if (rng.next_bool(0.5)) {
        return make_cc_request(
            id(true), id(true),
            static_cast<std::uint32_t>(rng.next_u64() & 0xFFFFFFFFu));
      }
      return make_cc_response(
          id(true), id(true),
          static_cast<std::uint32_t>(rng.next_u64() & 0xFFFFFFFFu),
          static_cast<std::uint32_t>(rng.next_u64() & 0xFFFFFFFFu));
    default:
      return make_data(id(true), id(false), id(true),
                       static_cast<std::uint32_t>(rng.next_u64() & 0xFFFFFFFFu),
                       static_cast<SimTime>(rng.next_range(0, 1u << 30)));
  }
}

int codec_failures() {
  WireSizes sizes;
  Rng rng = derive_rng(20260816, 0, kInvalidNode, "acceptance-codec");
  int failures = 0;
  for (int i = 0; i < kCodecTrials; ++i) {
    Message m = random_message(rng);
    std::vector<std::uint8_t> bytes;
    if (m.kind() == MsgKind::Cc) {
      bytes = encode_inner(m, sizes);  // plain framing of these is forbidden
    } else {
      EncodeResult e = encode_plain(m, sizes);
      if (!e.ok()) {
        ++failures;
        continue;
      }
      bytes = std::move(e.bytes);
    }
    DecodeResult d = decode_frame(bytes);
    if (!d.ok() || !(d.msg == m)) ++failures;
  }
  return failures;
}

int wrong_key_accepts() {
  WireSizes sizes;
  Rng rng = derive_rng(20260816, 0, kInvalidNode, "acceptance-wrongkey");
  const Key k1 = *key_from_hex("000102030405060708090a0b0c0d0e0f");
  const Key k2 = *key_from_hex("0f0e0d0c0b0a09080706050403020100");
  int accepts = 0;
  for (int i = 0; i < kWrongKeyTrials; ++i) {
    Message m = random_message(rng);
    SecureHeader hdr;
    hdr.level = SecLevel::EncMac;
    hdr.sender = m.sender;
    hdr.counter = static_cast<std::uint32_t>(i + 1);
    auto sealed = seal_frame(k1, hdr, encode_inner(m, sizes));
    if (open_frame(k2, sealed).has_value()) ++accepts;
  }
  return accepts;
}

}  // namespace

int main() {
  const double suite_t0 = now_s();

  // ---- setup: all sixteen cells must load, each with ten rounds ----------
  for (const auto& exp : kExperiments) {
    for (const auto& scen : kScenarios) {
      const std::string path = "scenarios/" + exp + "-" + scen + ".json";
      try {
        ScenarioConfig cfg = load_scenario(path);
        if (cfg.rounds != 10) {
          std::cout << "[FAIL] setup " << path << " has " << cfg.rounds
                    << " rounds, expected 10\n";
          return 1;
        }
      } catch (const std::exception& e) {
        std::cout << "[FAIL] setup cannot load " << path << ": " << e.what()
                  << "\n       (run from the repository root)\n";
        return 1;
      }
    }
  }

  MatrixRun run1 = run_matrix();
  MatrixRun run2 = run_matrix();

  // ---- A1: attack-free baseline mode is stable and fast ------------------
  {
    double lo = 1.0, hi = 0.0;
    for (const auto& scen : kScenarios) {
      double pdr = cell_mean(run1, "psm-e-" + scen, "pdr");
      lo = std::min(lo, pdr);
      hi = std::max(hi, pdr);
    }
    const bool ok = lo >= kBaselineMinPdr && (hi - lo) < kBaselineMaxPairGap &&
                    run1.baseline_mode_wall_s < kBaselineMaxWallS;
    report("A1", ok,
           "outsider-threat cells: pdr " + fmt(lo) + ".." + fmt(hi) +
               " (floor " + fmt(kBaselineMinPdr, 2) + ", gap < " +
               fmt(kBaselineMaxPairGap, 2) + "), 40 rounds in " +
               fmt(run1.baseline_mode_wall_s, 1) + "s (limit " +
               fmt(kBaselineMaxWallS, 0) + "s)");
  }

  // ---- A2: selective forwarding lands in band, worst latency -------------
  {
    bool ok = true;
    std::string seen;
    for (const std::string exp : {"um-i", "psm-i", "psmrp-i"}) {
      const double pdr = cell_mean(run1, exp + "-selective-forward", "pdr");
      const double e2e = cell_mean(run1, exp + "-selective-forward", "e2e_ms");
      if (pdr < kSfPdrLow || pdr > kSfPdrHigh) ok = false;
      for (const std::string other :
           {"no-attack", "blackhole", "neighbor-replay"}) {
        if (e2e <= cell_mean(run1, exp + "-" + other, "e2e_ms")) ok = false;
      }
      if (!seen.empty()) seen += " ";
      seen += exp + "=" + fmt(pdr);
    }
    report("A2", ok,
           "selective-forward pdr in [" + fmt(kSfPdrLow, 2) + "," +
               fmt(kSfPdrHigh, 2) + "] and highest e2e per experiment: " +
               seen);
  }

  // ---- A3: blackhole band, eviction, and re-parenting window -------------
  {
    bool ok = true;
    std::string detail;
    for (const std::string exp : {"um-i", "psm-i"}) {
      const std::string cell = exp + "-blackhole";
      const double pdr = cell_mean(run1, cell, "pdr");
      if (pdr < kBhPdrLow || pdr > kBhPdrHigh) ok = false;

      const auto kids =
          run1.cells.at(cell).result.values("adversary_children_final");
      int childless = 0;
      for (double k : kids) {
        if (k == 0.0) ++childless;
      }
      if (childless < kBhMinChildlessRounds) ok = false;

      const auto rep =
          run1.cells.at(cell).result.values("first_reparent_after_launch_s");
      double mean_rep = 0.0;
      for (double r : rep) {
        if (r < 0.0) ok = false;  // a round where nobody ever walked away
        mean_rep += r;
      }
      mean_rep /= static_cast<double>(rep.size());
      if (mean_rep < kBhReparentLowS || mean_rep > kBhReparentHighS) ok = false;

      if (!detail.empty()) detail += " ";
      detail += exp + ": pdr=" + fmt(pdr) + " childless=" +
                std::to_string(childless) + "/" + std::to_string(kids.size()) +
                " reparent=" + fmt(mean_rep, 1) + "s";
    }
    report("A3", ok,
           "blackhole pdr in [" + fmt(kBhPdrLow, 2) + "," + fmt(kBhPdrHigh, 2) +
               "], adversary childless >= " +
               std::to_string(kBhMinChildlessRounds) +
               " rounds, re-parenting in [" + fmt(kBhReparentLowS, 0) + "," +
               fmt(kBhReparentHighS, 0) + "]s: " + detail);
  }

  // ---- A4: replay protection closes the replay gap ------------------------
  {
    const double pdr_rp = cell_mean(run1, "psmrp-i-neighbor-replay", "pdr");
    const double pdr_plain = cell_mean(run1, "psm-i-neighbor-replay", "pdr");
    const double e2e_rp = cell_mean(run1, "psmrp-i-neighbor-replay", "e2e_ms");
    const double e2e_plain = cell_mean(run1, "psm-i-neighbor-replay", "e2e_ms");
    const double bh_delta =
        std::abs(pdr_plain - cell_mean(run1, "psm-i-blackhole", "pdr"));
    const bool ok = (pdr_rp - pdr_plain) >= kRpMinPdrGap &&
                    e2e_rp < e2e_plain && bh_delta <= kRpMaxBlackholeDelta;
    report("A4", ok,
           "replay-protected pdr gap " + fmt(pdr_rp - pdr_plain) + " (>= " +
               fmt(kRpMinPdrGap, 2) + "), e2e " + fmt(e2e_rp, 2) + " < " +
               fmt(e2e_plain, 2) + "ms, unprotected replay within " +
               fmt(bh_delta) + " of blackhole (<= " +
               fmt(kRpMaxBlackholeDelta, 2) + ")");
  }

  // ---- A5: control overhead stays flat except under challenges -----------
  {
    const double base = cell_mean(run1, "um-i-no-attack", "ctrl_sent");
    bool ok = base > 0.0;
    double worst = 0.0;
    for (const auto& exp : kExperiments) {
      for (const auto& scen : kScenarios) {
        const std::string cell = exp + "-" + scen;
        if (cell == "psmrp-i-neighbor-replay") continue;
        const double rel =
            std::abs(cell_mean(run1, cell, "ctrl_sent") - base) / base;
        worst = std::max(worst, rel);
        if (rel > kCtrlTolerance) ok = false;
      }
    }
    const double rp_ctrl = cell_mean(run1, "psmrp-i-neighbor-replay",
                                     "ctrl_sent");
    const double plain_ctrl =
        cell_mean(run1, "psm-i-neighbor-replay", "ctrl_sent");
    const double increase = rp_ctrl / plain_ctrl - 1.0;
    if (increase < kCtrlMinReplayIncrease) ok = false;
    if (!run1.recv_gt_sent_every_round || !run2.recv_gt_sent_every_round) {
      ok = false;
    }
    report("A5", ok,
           "ctrl within " + fmt(kCtrlTolerance * 100, 0) +
               "% of baseline (worst " + fmt(worst * 100, 1) +
               "%), challenge surcharge +" + fmt(increase * 100, 1) + "% (>= " +
               fmt(kCtrlMinReplayIncrease * 100, 0) +
               "%), received > sent every round");
  }

  // ---- A6: energy per delivered packet ------------------------------------
  {
    const double rp = cell_mean(run1, "psmrp-i-neighbor-replay",
                                "power_per_delivered_mj");
    const double plain =
        cell_mean(run1, "psm-i-neighbor-replay", "power_per_delivered_mj");
    const double outsider =
        cell_mean(run1, "psm-e-no-attack", "power_per_delivered_mj");
    const double insider =
        cell_mean(run1, "psm-i-no-attack", "power_per_delivered_mj");
    const double plain_um =
        cell_mean(run1, "um-i-no-attack", "power_per_delivered_mj");
    const double increase = rp / plain - 1.0;
    const double mode_delta = std::abs(plain_um - insider) / plain_um;
    const bool ok = increase >= kPowerMinReplayIncrease && outsider > insider &&
                    mode_delta <= kPowerModeTolerance;
    report("A6", ok,
           "replay-protection power +" + fmt(increase * 100, 1) + "% (>= " +
               fmt(kPowerMinReplayIncrease * 100, 0) + "%), outsider " +
               fmt(outsider, 3) + " > insider " + fmt(insider, 3) +
               " mJ/pkt, secured vs plain delta " + fmt(mode_delta * 100, 1) +
               "% (<= " + fmt(kPowerModeTolerance * 100, 0) + "%)");
  }

  // ---- A7: mechanised checks ----------------------------------------------
  {
    const int codec = codec_failures();
    const int accepts = wrong_key_accepts();
    const bool deterministic = run1.summary == run2.summary;
    const std::size_t violations =
        run1.violations.size() + run2.violations.size();
    for (std::size_t i = 0; i < run1.violations.size() && i < 10; ++i) {
      std::cout << "       invariant violation: " << run1.violations[i]
                << "\n";
    }
    const double wall = now_s() - suite_t0;
    const bool ok = codec == 0 && accepts == 0 && deterministic &&
                    violations == 0 && wall < kMaxSuiteWallS;
    report("A7", ok,
           "codec " + std::to_string(kCodecTrials) + " round-trips (" +
               std::to_string(codec) + " failures), " +
               std::to_string(kWrongKeyTrials) + " wrong-key opens (" +
               std::to_string(accepts) + " accepted), " +
               std::to_string(violations) +
               " invariant violations, byte-identical reruns: " +
               (deterministic ? "yes" : "NO") + ", " + fmt(wall, 1) +
               "s total (limit " + fmt(kMaxSuiteWallS, 0) + "s)");
  }

  // ---- A8: interval oracle -------------------------------------------------
  {
    ExperimentResult oracle;
    oracle.rounds.resize(2);
    oracle.rounds[0].pdr = 0.8;
    oracle.rounds[1].pdr = 1.0;
    const Ci95 ci = oracle.aggregate("pdr");
    const bool ok = std::abs(ci.mean - 0.9) < kCiTolerance &&
                    std::abs(ci.half_width - 1.2706) < kCiTolerance;
    report("A8", ok,
           "two-sample interval mean " + fmt(ci.mean, 6) + " half-width " +
               fmt(ci.half_width, 6) + " (expected 0.900000 / 1.270600 within " +
               "1e-9)");
  }

  std::cout << (g_failures == 0 ? "acceptance: all criteria passed\n"
                                : "acceptance: " +
                                      std::to_string(g_failures) +
                                      " criteria FAILED\n");
  return g_failures == 0 ? 0 : 1;
}
