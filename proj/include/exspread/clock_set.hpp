#ifndef EXSPREAD_CLOCK_SET_HPP
#define EXSPREAD_CLOCK_SET_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include "exspread/rng.hpp"

namespace exspread {

struct ClockOutcome {
  bool fired = false;       // false: horizon exhausted
  std::size_t clock = 0;    // id of the accepted clock
  double time = 0.0;        // event time, or the horizon when not fired
};

// Competing exponential clocks with optional Lewis-Shedler thinning for the
// time-varying ones. Candidate events arrive at the total envelope rate; a
// rejected thinning draw advances time without producing an event.
class ClockSet {
 public:
  std::size_t add_constant(double rate) {
    if (rate < 0.0) throw std::invalid_argument("ClockSet: negative rate");
    clocks_.push_back({rate, nullptr});
    total_ += rate;
    return clocks_.size() - 1;
  }

  std::size_t add_thinned(double envelope_rate, std::function<double(double)> rate_at) {
    if (envelope_rate < 0.0) throw std::invalid_argument("ClockSet: negative envelope");
    clocks_.push_back({envelope_rate, std::move(rate_at)});
    total_ += envelope_rate;
    return clocks_.size() - 1;
  }

  double total_envelope() const { return total_; }

  ClockOutcome next(double now, double horizon, Rng& rng) const {
    if (total_ <= 0.0) return {false, 0, horizon};
    double t = now;
    while (true) {
      t += rng.exponential(total_);
      if (t > horizon) return {false, 0, horizon};
      double v = rng.uniform() * total_;
      std::size_t k = 0;
      for (; k + 1 < clocks_.size(); ++k) {
        if (v < clocks_[k].envelope) break;
        v -= clocks_[k].envelope;
      }
      const auto& c = clocks_[k];
      if (!c.rate_at) return {true, k, t};
      const double r = c.rate_at(t);
      if (r > c.envelope * (1.0 + 1e-9))
        throw std::runtime_error("ClockSet: rate exceeds the declared envelope");
      if (v < r) return {true, k, t};
      // rejected: time has advanced, state unchanged
    }
  }

 private:
  struct Clock {
    double envelope;
    std::function<double(double)> rate_at;  // null for constant-rate clocks
  };
  std::vector<Clock> clocks_;
  double total_ = 0.0;
};

// One step of the exact simulation: next accepted event across the clocks, or
// horizon exhaustion.
inline ClockOutcome kmc_step(const ClockSet& clocks, double now, double horizon, Rng& rng) {
  return clocks.next(now, horizon, rng);
}

}  // namespace exspread

#endif
