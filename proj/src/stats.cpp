#include "ouexit/stats.hpp"

#include <algorithm>
#include <cmath>

#include "ouexit/errors.hpp"

namespace ouexit {

double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n <= 32) {
    double s = 0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

McEstimate mc_estimate(std::span<const double> values) {
  McEstimate est;
  est.n = static_cast<long>(values.size());
  if (est.n == 0) throw InsufficientData("mc_estimate: empty sample");
  est.mean = pairwise_sum(values) / static_cast<double>(est.n);
  if (est.n == 1) return est;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - est.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(est.n - 1);
  est.std_error = std::sqrt(var / static_cast<double>(est.n));
  return est;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InsufficientData("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double hi = (static_cast<double>(i) + 1.0) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  return d;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw InsufficientData("pearson_correlation: need two samples of equal size >= 2");
  const double ma = pairwise_sum(a) / static_cast<double>(a.size());
  const double mb = pairwise_sum(b) / static_cast<double>(b.size());
  std::vector<double> ab(a.size()), aa(a.size()), bb(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    ab[i] = da * db;
    aa[i] = da * da;
    bb[i] = db * db;
  }
  return pairwise_sum(ab) / std::sqrt(pairwise_sum(aa) * pairwise_sum(bb));
}

}  // namespace ouexit
