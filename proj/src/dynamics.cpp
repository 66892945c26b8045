#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "exspread/quadrature.hpp"
#include "exspread/rng.hpp"
#include "exspread/sim.hpp"

namespace exspread {

namespace {

constexpr double kExteriorAbortBudget = 0.1;
constexpr double kExteriorMarginBudget = 0.05;

// Unordered in-window exchange pairs, rate N^2 p(z) per pair (x, x+z).
struct ExchangeTable {
  double total = 0.0;
  std::vector<double> cum;  // cumulative weight of displacement classes 1..range
  long cells = 0;

  ExchangeTable(const JumpKernel& kernel, int N, long cells_in) : cells(cells_in) {
    const double n2 = static_cast<double>(N) * static_cast<double>(N);
    cum.resize(static_cast<std::size_t>(kernel.range()));
    double acc = 0.0;
    for (int z = 1; z <= kernel.range(); ++z) {
      const long bonds = std::max<long>(0, cells - z);
      acc += n2 * kernel.prob(z) * static_cast<double>(bonds);
      cum[static_cast<std::size_t>(z - 1)] = acc;
    }
    total = acc;
  }

  // v uniform in [0, total) selects the displacement class; the bond within
  // the class is drawn separately.
  std::pair<long, long> pick(double v, Rng& rng) const {
    std::size_t zi = 0;
    while (v >= cum[zi] && zi + 1 < cum.size()) ++zi;
    const long z = static_cast<long>(zi) + 1;
    const long i = static_cast<long>(rng.below(static_cast<std::uint64_t>(cells - z)));
    return {i, i + z};
  }
};

// Per-cell constant envelopes dominating a time-varying site rate, with a
// cumulative table for proportional selection.
struct FieldEnvelope {
  std::vector<double> cum;
  double total = 0.0;

  template <typename SupFn>
  void rebuild(long cells, SupFn&& sup_at) {
    cum.resize(static_cast<std::size_t>(cells));
    double acc = 0.0;
    for (long i = 0; i < cells; ++i) {
      acc += sup_at(i);
      cum[static_cast<std::size_t>(i)] = acc;
    }
    total = acc;
  }

  long pick(double v) const {
    const auto it = std::upper_bound(cum.begin(), cum.end(), v);
    return static_cast<long>(it - cum.begin());
  }
};

// Sum of rate envelopes over an exponentially decaying tail of sites.
template <typename TermFn>
double tail_sum(TermFn&& term) {
  double acc = 0.0;
  for (long k = 0; k < 4'000'000; ++k) {
    const double v = term(k);
    acc += v;
    if (v < 1e-16 * (acc + 1e-300)) break;
  }
  return acc;
}

std::vector<double> checked_snapshot_times(const SimParams& p) {
  std::vector<double> times = p.snapshot_times;
  if (times.empty()) times.push_back(p.T);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  if (times.front() < 0.0 || times.back() > p.T + 1e-12)
    throw std::invalid_argument("snapshot_times: must lie in [0, T]");
  return times;
}

}  // namespace

double auto_margin(const SimParams& params) {
  const double sigma2 = params.kernel.sigma_sq();
  double margin = 4.0 * std::sqrt(2.0 * sigma2 * params.T) + 0.5;
  if (!params.rate.is_zero()) {
    const auto mass = cumulative_trapezoid(
        [&params](double s) { return params.rate.total_mass(s); }, params.T, 1024);
    margin += 1.5 * mass.back();
    // enlarge until translations from outside the window are negligible:
    // expected exterior candidates ~ 2 T sum_{|x| > (W+M)N} envC exp(-beta|x|/N)
    const double beta = params.rate.envelope_beta();
    const double c = params.rate.envelope_c();
    const double n = static_cast<double>(params.N);
    const auto exterior_budget = [&](double m) {
      const double geom = std::exp(-beta / n * std::ceil((params.window.observe + m) * n)) /
                          (1.0 - std::exp(-beta / n));
      return 2.0 * params.T * c * geom;
    };
    while (exterior_budget(margin) > kExteriorMarginBudget) margin += 0.25;
  }
  return margin;
}

long window_half_sites(const SimParams& params) {
  const double margin = params.window.margin > 0.0 ? params.window.margin : auto_margin(params);
  const double half = (params.window.observe + margin) * static_cast<double>(params.N);
  return std::max<long>(2, static_cast<long>(std::ceil(half)));
}

ExclusionConfig make_eprs_window(const SimParams& params) {
  const long k = window_half_sites(params);
  return ExclusionConfig(-k, std::vector<std::uint8_t>(static_cast<std::size_t>(2 * k + 1), 0));
}

SpreadConfig make_epcs_window(const SimParams& params) {
  const long k = window_half_sites(params);
  return SpreadConfig(-2 * k, std::vector<std::uint8_t>(static_cast<std::size_t>(2 * k + 1), 0));
}

EprsTrajectory simulate_eprs(const SimParams& params, const ExclusionConfig& init) {
  if (params.N < 1) throw std::invalid_argument("SimParams.N: must be >= 1");
  if (params.T <= 0.0) throw std::invalid_argument("SimParams.T: must be > 0");

  EprsTrajectory out;
  out.N = params.N;
  out.T = params.T;
  out.initial = init;
  out.snapshot_times = checked_snapshot_times(params);

  ExclusionConfig config = init;
  const long cells = config.size();
  const long wl = config.window_left();
  const double n = static_cast<double>(params.N);

  const ExchangeTable exchange(params.kernel, params.N, cells);
  const RateField& rate = params.rate;
  const bool has_field = !rate.is_zero();

  FieldEnvelope field;
  double exterior_left_env = 0.0;
  // right-exterior shifts do not alter the window; they are counted so the
  // translation statistic stays unbiased
  double exterior_right_env = 0.0;
  if (has_field) {
    field.rebuild(cells, [&](long i) {
      return rate.time_sup(static_cast<double>(wl + i) / n);
    });
    exterior_left_env = tail_sum([&](long k) {
      return rate.time_sup(static_cast<double>(wl - 1 - k) / n);
    });
    exterior_right_env = tail_sum([&](long k) {
      return rate.time_sup(static_cast<double>(wl + cells + k) / n);
    });
    const double budget = exterior_left_env * params.T;
    if (budget > kExteriorAbortBudget)
      throw std::runtime_error(
          "simulate_eprs: expected exterior shift count " + std::to_string(budget) +
          " exceeds " + std::to_string(kExteriorAbortBudget) + "; enlarge the window margin");
  }

  Rng rng = Rng::keyed(params.seed, params.replica, stream::kDynamics);
  std::vector<long> shift_counts(static_cast<std::size_t>(cells), 0);

  const double field_total = field.total + exterior_left_env + exterior_right_env;
  const double rate_total = exchange.total + field_total;

  double t = 0.0;
  for (double boundary : out.snapshot_times) {
    while (true) {
      const double t_next = t + rng.exponential(rate_total);
      if (t_next > boundary) break;
      t = t_next;
      double v = rng.uniform() * rate_total;
      if (v < exchange.total) {
        const auto [i, j] = exchange.pick(v, rng);
        if (config.at_index(i) != config.at_index(j)) {
          config.exchange_index(i, j);
          ++out.totals.exchange_effective;
          if (params.event_log)
            out.events.push_back({t, EventKind::Exchange, static_cast<std::int32_t>(i),
                                  static_cast<std::int32_t>(j)});
        } else {
          ++out.totals.exchange_noop;
        }
        continue;
      }
      v -= exchange.total;
      if (v < field.total) {
        const long i = field.pick(v);
        const double u = static_cast<double>(wl + i) / n;
        const double envelope = field.cum[static_cast<std::size_t>(i)] -
                                (i > 0 ? field.cum[static_cast<std::size_t>(i - 1)] : 0.0);
        const double actual = rate.value(t, u);
        if (actual > envelope * (1.0 + 1e-9))
          throw std::runtime_error("simulate_eprs: rate exceeds its thinning envelope");
        if (rng.uniform() * envelope < actual) {
          config.tau_shift(wl + i);
          ++shift_counts[static_cast<std::size_t>(i)];
          ++out.totals.field_events;
          if (params.event_log)
            out.events.push_back({t, EventKind::Shift, static_cast<std::int32_t>(i), -1});
        } else {
          ++out.totals.thinning_rejected;
        }
        continue;
      }
      v -= field.total;
      if (v < exterior_left_env) {
        const double actual = tail_sum([&](long k) {
          return rate.value(t, static_cast<double>(wl - 1 - k) / n);
        });
        if (rng.uniform() * exterior_left_env < actual) {
          config.shift_fill_left();
          ++out.totals.exterior_left;
          if (params.event_log) out.events.push_back({t, EventKind::ExteriorLeft, -1, -1});
        } else {
          ++out.totals.thinning_rejected;
        }
        continue;
      }
      // right exterior: counter only
      const double actual = tail_sum([&](long k) {
        return rate.value(t, static_cast<double>(wl + cells + k) / n);
      });
      if (rng.uniform() * exterior_right_env < actual) {
        ++out.totals.exterior_right;
        if (params.event_log) out.events.push_back({t, EventKind::ExteriorRight, -1, -1});
      } else {
        ++out.totals.thinning_rejected;
      }
    }
    t = boundary;
    out.snapshots.push_back(config);
    out.shift_counts_at.push_back(shift_counts);
    out.totals_at.push_back(out.totals);
  }
  return out;
}

EpcsTrajectory simulate_epcs(const SimParams& params, const SpreadConfig& init) {
  if (params.N < 1) throw std::invalid_argument("SimParams.N: must be >= 1");
  if (params.T <= 0.0) throw std::invalid_argument("SimParams.T: must be > 0");
  if (init.mass_n() != 1 || init.parity() != SpreadParity::Gamma1)
    throw std::invalid_argument("simulate_epcs: initial state must be (1, eta) on Gamma1");

  EpcsTrajectory out;
  out.N = params.N;
  out.T = params.T;
  out.initial = init;
  out.snapshot_times = checked_snapshot_times(params);

  SpreadConfig config = init;
  const long cells = config.size();
  const double n2 = 2.0 * static_cast<double>(params.N);

  const ExchangeTable exchange(params.kernel, params.N, cells);
  const RateField& rate = params.rate;
  const bool has_field = !rate.is_zero();

  FieldEnvelope field;
  double exterior_left_env = 0.0;
  double exterior_right_env = 0.0;
  const auto rebuild_envelopes = [&]() {
    if (!has_field) return;
    const long anchor = config.anchor_half();
    field.rebuild(cells, [&](long i) {
      return rate.time_sup(static_cast<double>(anchor + 2 * i) / n2);
    });
    exterior_left_env = tail_sum([&](long k) {
      return rate.time_sup(static_cast<double>(anchor - 2 - 2 * k) / n2);
    });
    exterior_right_env = tail_sum([&](long k) {
      return rate.time_sup(static_cast<double>(anchor + 2 * (cells + k)) / n2);
    });
  };
  rebuild_envelopes();
  if (has_field) {
    const double budget = (exterior_left_env + exterior_right_env) * params.T;
    if (budget > kExteriorAbortBudget)
      throw std::runtime_error(
          "simulate_epcs: expected exterior spread count " + std::to_string(budget) +
          " exceeds " + std::to_string(kExteriorAbortBudget) + "; enlarge the window margin");
  }

  Rng rng = Rng::keyed(params.seed, params.replica, stream::kDynamics);

  double t = 0.0;
  for (double boundary : out.snapshot_times) {
    while (true) {
      const double field_total = field.total + exterior_left_env + exterior_right_env;
      const double rate_total = exchange.total + field_total;
      const double t_next = t + rng.exponential(rate_total);
      if (t_next > boundary) break;
      t = t_next;
      double v = rng.uniform() * rate_total;
      if (v < exchange.total) {
        const auto [i, j] = exchange.pick(v, rng);
        if (config.at_index(i) != config.at_index(j)) {
          config.exchange_index(i, j);
          ++out.totals.exchange_effective;
          if (params.event_log)
            out.events.push_back({t, EventKind::Exchange, static_cast<std::int32_t>(i),
                                  static_cast<std::int32_t>(j)});
        } else {
          ++out.totals.exchange_noop;
        }
        continue;
      }
      v -= exchange.total;
      if (v < field.total) {
        const long i = field.pick(v);
        const long pos = config.anchor_half() + 2 * i;
        const double envelope = field.cum[static_cast<std::size_t>(i)] -
                                (i > 0 ? field.cum[static_cast<std::size_t>(i - 1)] : 0.0);
        const double actual = rate.value(t, static_cast<double>(pos) / n2);
        if (actual > envelope * (1.0 + 1e-9))
          throw std::runtime_error("simulate_epcs: rate exceeds its thinning envelope");
        if (rng.uniform() * envelope < actual) {
          config.tau_tilde_spread(pos);
          ++out.totals.field_events;
          if (params.event_log)
            out.events.push_back({t, EventKind::Spread, static_cast<std::int32_t>(i), -1});
          rebuild_envelopes();
        } else {
          ++out.totals.thinning_rejected;
        }
        continue;
      }
      v -= field.total;
      if (v < exterior_left_env) {
        const double actual = tail_sum([&](long k) {
          return rate.value(t, static_cast<double>(config.anchor_half() - 2 - 2 * k) / n2);
        });
        if (rng.uniform() * exterior_left_env < actual) {
          config.exterior_spread_left();
          ++out.totals.exterior_left;
          if (params.event_log) out.events.push_back({t, EventKind::ExteriorLeft, -1, -1});
          rebuild_envelopes();
        } else {
          ++out.totals.thinning_rejected;
        }
        continue;
      }
      const double actual = tail_sum([&](long k) {
        return rate.value(
            t, static_cast<double>(config.anchor_half() + 2 * (cells + k)) / n2);
      });
      if (rng.uniform() * exterior_right_env < actual) {
        config.exterior_spread_right();
        ++out.totals.exterior_right;
        if (params.event_log) out.events.push_back({t, EventKind::ExteriorRight, -1, -1});
        rebuild_envelopes();
      } else {
        ++out.totals.thinning_rejected;
      }
    }
    t = boundary;
    out.snapshots.push_back(config);
    out.shift_counts_at.emplace_back();
    out.totals_at.push_back(out.totals);
  }
  return out;
}

}  // namespace exspread
