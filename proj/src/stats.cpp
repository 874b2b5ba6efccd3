#include "rplsim/stats.hpp"

namespace rplsim {

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

double t_critical_95(int df) {
  // Two-sided 95% (upper 0.975 quantile), df 1..30; the normal quantile
  // beyond that.
  static const double table[30] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) return 0.0;
  if (df <= 30) return table[df - 1];
  return 1.960;
}

Ci95 confidence_interval_95(const std::vector<double>& xs) {
  Ci95 ci;
  ci.mean = mean(xs);
  if (xs.size() < 2) return ci;
  const double s = sample_stddev(xs);
  const double n = static_cast<double>(xs.size());
  ci.half_width = t_critical_95(static_cast<int>(xs.size()) - 1) * s / std::sqrt(n);
  return ci;
}

}  // namespace rplsim
