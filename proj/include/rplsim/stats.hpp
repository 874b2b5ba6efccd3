#pragma once

#include <cmath>
#include <vector>

namespace rplsim {

double mean(const std::vector<double>& xs);

// Sample standard deviation (n-1 denominator). 0 for n < 2.
double sample_stddev(const std::vector<double>& xs);

// Two-sided 97.5% quantile of Student's t for the given degrees of
// freedom (95% confidence interval factor).
double t_critical_95(int df);

struct Ci95 {
  double mean = 0.0;
  double half_width = 0.0;
};

// mean ± t(df=n−1) · s/√n. Half-width 0 for a single sample.
Ci95 confidence_interval_95(const std::vector<double>& xs);

}  // namespace rplsim
