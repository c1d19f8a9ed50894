#pragma once

// Sample statistics used by the Monte Carlo validators. Sums are pairwise in
// a fixed order, so estimates do not depend on how the path loop was split
// across workers.

#include <functional>
#include <span>
#include <vector>

namespace ouexit {

struct McEstimate {
  double mean = 0;
  double std_error = 0;
  long n = 0;
  double censored_fraction = 0;
};

double pairwise_sum(std::span<const double> values);

// Mean and standard error (sample std / sqrt(n)).
McEstimate mc_estimate(std::span<const double> values);

// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

double pearson_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace ouexit
