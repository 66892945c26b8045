#ifndef EXSPREAD_NHPP_HPP
#define EXSPREAD_NHPP_HPP

#include <vector>

#include "exspread/clock_set.hpp"
#include "exspread/rate_field.hpp"
#include "exspread/rng.hpp"

namespace exspread {

// Event times of a Poisson process on [0,T] with intensity s -> rate(s, x/N),
// sampled by thinning against the constant envelope sup_{s<=T} rate(s, x/N).
inline std::vector<double> sample_nhpp(const RateField& rate, long site, int N, double T,
                                       Rng& rng) {
  const double u = static_cast<double>(site) / static_cast<double>(N);
  const double envelope = rate.time_sup(u);
  std::vector<double> times;
  if (envelope <= 0.0) return times;
  ClockSet clocks;
  clocks.add_thinned(envelope, [&rate, u](double s) { return rate.value(s, u); });
  double t = 0.0;
  while (true) {
    const auto ev = clocks.next(t, T, rng);
    if (!ev.fired) break;
    t = ev.time;
    times.push_back(t);
  }
  return times;
}

}  // namespace exspread

#endif
