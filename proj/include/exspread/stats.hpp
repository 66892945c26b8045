#ifndef EXSPREAD_STATS_HPP
#define EXSPREAD_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace exspread {

// Welford accumulator; merge() combines two accumulators exactly
// (Chan et al. pairwise update), so replica reductions are associative
// up to floating-point rounding.
struct RunningStat {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const RunningStat& o) {
    if (o.n == 0) return;
    if (n == 0) { *this = o; return; }
    const double d = o.mean - mean;
    const double nt = static_cast<double>(n + o.n);
    m2 += o.m2 + d * d * (static_cast<double>(n) * static_cast<double>(o.n)) / nt;
    mean += d * static_cast<double>(o.n) / nt;
    n += o.n;
  }

  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }
  double stderr_mean() const { return n > 0 ? stddev() / std::sqrt(static_cast<double>(n)) : 0.0; }
};

// Survival function of the Kolmogorov distribution, Q(x) = 2 sum (-1)^{k-1} exp(-2 k^2 x^2).
inline double kolmogorov_q(double x) {
  if (x <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// One-sample Kolmogorov-Smirnov p-value for data against a CDF given as a
// callable. Uses the asymptotic distribution with the Stephens correction.
template <typename Cdf>
double ks_test_pvalue(std::vector<double> data, Cdf cdf) {
  if (data.empty()) throw std::invalid_argument("ks_test_pvalue: empty sample");
  std::sort(data.begin(), data.end());
  const auto n = static_cast<double>(data.size());
  double d = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double f = cdf(data[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  const double sn = std::sqrt(n);
  return kolmogorov_q(d * (sn + 0.12 + 0.11 / sn));
}

// Two-sample Welch z statistic for equality of means.
inline double welch_z(const RunningStat& a, const RunningStat& b) {
  const double se = std::sqrt(a.variance() / static_cast<double>(a.n) +
                              b.variance() / static_cast<double>(b.n));
  if (se == 0.0) return 0.0;
  return (a.mean - b.mean) / se;
}

// Standard normal survival-based two-sided p-value.
inline double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

}  // namespace exspread

#endif
