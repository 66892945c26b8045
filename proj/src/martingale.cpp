#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "exspread/martingale.hpp"

namespace exspread {

namespace {

// sum of b(s, x/N) over lattice sites left of the window
double left_tail_rate(const RateField& rate, double s, long window_left, double n) {
  double acc = 0.0;
  for (long k = 0; k < 4'000'000; ++k) {
    const double v = rate.value(s, static_cast<double>(window_left - 1 - k) / n);
    acc += v;
    if (v < 1e-16 * (acc + 1e-300)) break;
  }
  return acc;
}

// Gauss-Legendre 5 on [0,1]
constexpr double kGlNode[5] = {0.046910077030668, 0.230765344947158, 0.5,
                               0.769234655052841, 0.953089922969332};
constexpr double kGlWeight[5] = {0.118463442528095, 0.239314335249683, 0.284444444444444,
                                 0.239314335249683, 0.118463442528095};

struct SiteWeights {
  long cells = 0;
  long s0 = 0, s1 = -1;      // support range of the weights below
  std::vector<double> g;     // G(u_i)
  std::vector<double> grad;  // N (G(u_{i+1}) - G(u_i)); zero continuation past the edge
  std::vector<double> dnp;   // window-truncated discrete Laplacian of G

  SiteWeights(const TestFunction& h, const SimParams& params, long window_left, long cells_in)
      : cells(cells_in) {
    const double n = static_cast<double>(params.N);
    g.assign(static_cast<std::size_t>(cells), 0.0);
    grad.assign(static_cast<std::size_t>(cells), 0.0);
    dnp.assign(static_cast<std::size_t>(cells), 0.0);
    for (long i = 0; i < cells; ++i)
      g[static_cast<std::size_t>(i)] = h(static_cast<double>(window_left + i) / n);
    for (long i = 0; i < cells; ++i) {
      const double next = i + 1 < cells ? g[static_cast<std::size_t>(i + 1)] : 0.0;
      grad[static_cast<std::size_t>(i)] = n * (next - g[static_cast<std::size_t>(i)]);
    }
    const int range = params.kernel.range();
    for (long i = 0; i < cells; ++i) {
      double acc = 0.0;
      for (int z = 1; z <= range; ++z) {
        if (i + z < cells)
          acc += params.kernel.prob(z) *
                 (g[static_cast<std::size_t>(i + z)] - g[static_cast<std::size_t>(i)]);
        if (i - z >= 0)
          acc += params.kernel.prob(z) *
                 (g[static_cast<std::size_t>(i - z)] - g[static_cast<std::size_t>(i)]);
      }
      dnp[static_cast<std::size_t>(i)] = n * n * acc;
    }
    s0 = cells;
    s1 = -1;
    for (long i = 0; i < cells; ++i) {
      if (g[static_cast<std::size_t>(i)] != 0.0 || grad[static_cast<std::size_t>(i)] != 0.0 ||
          dnp[static_cast<std::size_t>(i)] != 0.0) {
        s0 = std::min(s0, i);
        s1 = std::max(s1, i);
      }
    }
    if (s1 < 0) throw std::invalid_argument("diagnostics: test function vanishes on the window");
    if (s0 <= range || s1 >= cells - 1 - range)
      throw std::invalid_argument(
          "diagnostics: test function support reaches the window boundary");
  }
};

// Replays the event log, integrating both the generator drift of <pi, H> and
// the carre-du-champ rate exactly between configuration changes. Explicit time
// dependence integrates in closed form through the modulation; the per-site
// shift intensities come from the shared cumulative table. The combination of
// a time-dependent H with a nonzero shift field falls back to Gauss-Legendre
// quadrature per inter-event interval.
class Replay {
 public:
  Replay(const EprsTrajectory& record, const TestFunction& h, const SimParams& params,
         const ShiftIntensityTable* shared_table)
      : rec_(record),
        h_(h),
        params_(params),
        n_(static_cast<double>(params.N)),
        config_(record.initial),
        weights_(h, params, record.initial.window_left(), record.initial.size()),
        has_field_(!params.rate.is_zero()) {
    if (rec_.events.empty() &&
        rec_.totals.exchange_effective + rec_.totals.field_events +
                rec_.totals.exterior_left >
            0)
      throw std::invalid_argument("diagnostics: record carries no event log");
    if (has_field_) {
      if (shared_table && !shared_table->empty()) {
        table_ = shared_table;
      } else {
        owned_table_ = ShiftIntensityTable(params, config_.window_left(), config_.size());
        table_ = &owned_table_;
      }
    }
    slow_shift_path_ = has_field_ && !h_.modulation().is_constant();
    lazy_shift_path_ = has_field_ && !slow_shift_path_;

    pair0_ = struct_pair();
    pair_ = pair0_;
    s2_ = struct_dnp();
    rebuild_rs();
    rebuild_q2();
    const auto width = static_cast<std::size_t>(weights_.s1 - weights_.s0 + 1);
    last_qv_t_.assign(width, 0.0);
    last_m_t_.assign(width, 0.0);
  }

  // (M_t, <M>_t) at each sorted eval time
  std::vector<std::pair<double, double>> run(const std::vector<double>& eval_times) {
    std::vector<std::pair<double, double>> out;
    out.reserve(eval_times.size());
    std::size_t ev = 0;
    for (double target : eval_times) {
      if (target < now_ - 1e-12 || target > rec_.T + 1e-9)
        throw std::invalid_argument("diagnostics: eval times must be sorted within [0, T]");
      while (ev < rec_.events.size() && rec_.events[ev].time <= target) {
        const Event& e = rec_.events[ev];
        advance_time(e.time);
        apply_event(e.kind, e.a, e.b);
        ++ev;
      }
      advance_time(target);
      settle_everything(target);
      fold_lazy_totals();
      const double mart =
          h_.modulation()(target) * pair_ - h_.modulation()(0.0) * pair0_ - drift_;
      out.emplace_back(mart, qv_);
    }
    return out;
  }

 private:
  double struct_pair() const {
    double acc = 0.0;
    for (long i = weights_.s0; i <= weights_.s1; ++i)
      if (config_.at_index(i)) acc += weights_.g[static_cast<std::size_t>(i)];
    return acc / n_;
  }

  double struct_dnp() const {
    double acc = 0.0;
    for (long i = weights_.s0; i <= weights_.s1; ++i)
      if (config_.at_index(i)) acc += weights_.dnp[static_cast<std::size_t>(i)];
    return acc / n_;
  }

  // rs_[k] = sum_{y >= s0+k} grad(y) xi(y); constant for window indices < s0
  void rebuild_rs() {
    const long len = weights_.s1 - weights_.s0 + 1;
    rs_.assign(static_cast<std::size_t>(len) + 1, 0.0);
    double acc = 0.0;
    for (long i = weights_.s1; i >= weights_.s0; --i) {
      if (config_.at_index(i)) acc += weights_.grad[static_cast<std::size_t>(i)];
      rs_[static_cast<std::size_t>(i - weights_.s0)] = acc;
    }
  }

  double pair_weight(long a, long z) const {
    const double d =
        weights_.g[static_cast<std::size_t>(a + z)] - weights_.g[static_cast<std::size_t>(a)];
    return params_.kernel.prob(static_cast<int>(z)) * d * d;
  }

  void rebuild_q2() {
    q2_ = 0.0;
    const int range = params_.kernel.range();
    for (long a = std::max<long>(0, weights_.s0 - range); a <= weights_.s1; ++a)
      for (long z = 1; z <= range && a + z < weights_.cells; ++z)
        if (config_.at_index(a) != config_.at_index(a + z)) q2_ += pair_weight(a, z);
  }

  // ---- lazy accounting of the shift terms (time-constant modulation) ----

  void settle_prefix(double t) {
    if (!lazy_shift_path_) return;
    qv_shift_raw_ += rs_[0] * rs_[0] *
                     (table_->prefix_upto(t, weights_.s0 - 1) -
                      table_->prefix_upto(last_prefix_t_, weights_.s0 - 1));
    last_prefix_t_ = t;
  }

  void settle_qv_site(long i, double t) {
    if (!lazy_shift_path_) return;
    const auto k = static_cast<std::size_t>(i - weights_.s0);
    qv_shift_raw_ += rs_[k] * rs_[k] * (table_->site(t, i) - table_->site(last_qv_t_[k], i));
    last_qv_t_[k] = t;
  }

  void settle_m_site(long i, double t) {
    if (!lazy_shift_path_) return;
    const double gi = weights_.grad[static_cast<std::size_t>(i)];
    const auto k = static_cast<std::size_t>(i - weights_.s0);
    if (gi != 0.0 && config_.at_index(i))
      m_shift_raw_ +=
          gi * (table_->prefix_upto(t, i) - table_->prefix_upto(last_m_t_[k], i));
    last_m_t_[k] = t;
  }

  void settle_everything(double t) {
    if (!lazy_shift_path_) return;
    settle_prefix(t);
    for (long i = weights_.s0; i <= weights_.s1; ++i) {
      settle_qv_site(i, t);
      settle_m_site(i, t);
    }
  }

  void fold_lazy_totals() {
    if (!lazy_shift_path_) return;
    const double m0 = h_.modulation()(0.0);
    drift_ += m0 * m_shift_raw_ / (n_ * n_);
    qv_ += m0 * m0 * qv_shift_raw_ / (n_ * n_ * n_ * n_);
    m_shift_raw_ = 0.0;
    qv_shift_raw_ = 0.0;
  }

  // ---- direct integrands for the slow (time-dependent H) path ----

  double shift_drift_rate(double s) const {
    double acc = 0.0;
    double prefix = left_tail_rate(params_.rate, s, config_.window_left(), n_);
    for (long i = 0; i <= weights_.s1; ++i) {
      prefix += params_.rate.value(s, static_cast<double>(config_.window_left() + i) / n_);
      if (i >= weights_.s0 && config_.at_index(i))
        acc += weights_.grad[static_cast<std::size_t>(i)] * prefix;
    }
    return acc;
  }

  double shift_qv_rate(double s) const {
    double acc = left_tail_rate(params_.rate, s, config_.window_left(), n_) * rs_[0] * rs_[0];
    for (long i = 0; i <= weights_.s1; ++i) {
      const double r =
          i < weights_.s0 ? rs_[0] : rs_[static_cast<std::size_t>(i - weights_.s0)];
      acc += params_.rate.value(s, static_cast<double>(config_.window_left() + i) / n_) * r * r;
    }
    return acc;
  }

  void advance_time(double t) {
    if (t <= now_) return;
    const auto& mod = h_.modulation();
    drift_ += pair_ * (mod(t) - mod(now_));  // d/ds H term, integrated exactly
    drift_ += s2_ * mod.integral(now_, t);   // discrete Laplacian term
    // exchange carre-du-champ: N^2 p(z) (mod dG / N)^2 = p(z) mod^2 dG^2
    qv_ += q2_ * mod.integral_sq(now_, t);
    if (slow_shift_path_) {
      double d = 0.0, q = 0.0;
      for (int k = 0; k < 5; ++k) {
        const double s = now_ + (t - now_) * kGlNode[k];
        d += kGlWeight[k] * mod(s) * shift_drift_rate(s);
        q += kGlWeight[k] * mod(s) * mod(s) * shift_qv_rate(s);
      }
      drift_ += (t - now_) * d / (n_ * n_);
      qv_ += (t - now_) * q / (n_ * n_ * n_ * n_);
    }
    now_ = t;
  }

  void apply_event(EventKind kind, long a, long b) {
    switch (kind) {
      case EventKind::Exchange:
        apply_exchange(std::min(a, b), std::max(a, b));
        break;
      case EventKind::Shift:
        settle_everything(now_);
        config_.tau_shift(config_.window_left() + a);
        refresh_structures();
        break;
      case EventKind::ExteriorLeft:
        settle_everything(now_);
        config_.shift_fill_left();
        refresh_structures();
        break;
      case EventKind::ExteriorRight:
      case EventKind::Spread:
        break;  // no change to the window contents
    }
  }

  void apply_exchange(long i, long j) {
    const int xi = config_.at_index(i), xj = config_.at_index(j);
    const double delta = static_cast<double>(xj - xi);
    if (delta == 0.0) {
      config_.exchange_index(i, j);
      return;
    }
    pair_ += delta *
             (weights_.g[static_cast<std::size_t>(i)] - weights_.g[static_cast<std::size_t>(j)]) /
             n_;
    s2_ += delta *
           (weights_.dnp[static_cast<std::size_t>(i)] -
            weights_.dnp[static_cast<std::size_t>(j)]) /
           n_;

    // carre-du-champ exchange structure: re-evaluate the bonds touching i or j
    collect_touched_pairs(i, j);
    for (const auto& [a, z] : touched_)
      if (config_.at_index(a) != config_.at_index(a + z)) q2_ -= pair_weight(a, z);

    // suffix sums: x <= i gains delta (grad_i - grad_j), i < x <= j gains
    // -delta grad_j; sites below the support carry the x = s0 value
    const double d_low = delta * (weights_.grad[static_cast<std::size_t>(i)] -
                                  weights_.grad[static_cast<std::size_t>(j)]);
    const double d_mid = -delta * weights_.grad[static_cast<std::size_t>(j)];
    if (d_low != 0.0 || d_mid != 0.0) {
      settle_prefix(now_);
      const long hi = std::min(j, weights_.s1);
      for (long x = weights_.s0; x <= hi; ++x) {
        settle_qv_site(x, now_);
        rs_[static_cast<std::size_t>(x - weights_.s0)] += (x <= i) ? d_low : d_mid;
      }
    }
    if (i >= weights_.s0 && i <= weights_.s1) settle_m_site(i, now_);
    if (j >= weights_.s0 && j <= weights_.s1) settle_m_site(j, now_);

    config_.exchange_index(i, j);
    for (const auto& [a, z] : touched_)
      if (config_.at_index(a) != config_.at_index(a + z)) q2_ += pair_weight(a, z);
  }

  void collect_touched_pairs(long i, long j) {
    touched_.clear();
    const int range = params_.kernel.range();
    auto consider = [&](long a, long z) {
      if (a < 0 || a + z >= weights_.cells) return;
      if (a + z < weights_.s0 - range || a > weights_.s1 + range) return;
      touched_.emplace_back(a, z);
    };
    for (long z = 1; z <= range; ++z) {
      consider(i - z, z);
      consider(i, z);
      consider(j - z, z);
      consider(j, z);
    }
    std::sort(touched_.begin(), touched_.end());
    touched_.erase(std::unique(touched_.begin(), touched_.end()), touched_.end());
  }

  void refresh_structures() {
    pair_ = struct_pair();
    s2_ = struct_dnp();
    rebuild_rs();
    rebuild_q2();
  }

  const EprsTrajectory& rec_;
  const TestFunction& h_;
  const SimParams& params_;
  double n_;
  ExclusionConfig config_;
  SiteWeights weights_;
  bool has_field_;
  bool slow_shift_path_ = false;
  bool lazy_shift_path_ = false;
  const ShiftIntensityTable* table_ = nullptr;
  ShiftIntensityTable owned_table_;

  double now_ = 0.0;
  double pair0_ = 0.0;
  double pair_ = 0.0;
  double s2_ = 0.0;
  double q2_ = 0.0;
  double drift_ = 0.0;
  double qv_ = 0.0;

  std::vector<double> rs_;
  std::vector<std::pair<long, long>> touched_;

  double m_shift_raw_ = 0.0;
  double qv_shift_raw_ = 0.0;
  double last_prefix_t_ = 0.0;
  std::vector<double> last_qv_t_;
  std::vector<double> last_m_t_;
};

}  // namespace

ShiftIntensityTable::ShiftIntensityTable(const SimParams& params, long window_left, long cells,
                                         int time_points) {
  if (params.rate.is_zero()) return;
  horizon_ = params.T;
  points_ = std::max(time_points, 33);
  cols_ = cells + 1;
  data_.assign(static_cast<std::size_t>(points_) * static_cast<std::size_t>(cols_), 0.0);
  const double n = static_cast<double>(params.N);
  const double dt = horizon_ / static_cast<double>(points_ - 1);
  std::vector<double> prev(static_cast<std::size_t>(cols_));
  std::vector<double> cur(static_cast<std::size_t>(cols_));
  for (int j = 0; j < points_; ++j) {
    const double s = dt * static_cast<double>(j);
    cur[0] = left_tail_rate(params.rate, s, window_left, n);
    for (long c = 1; c < cols_; ++c)
      cur[static_cast<std::size_t>(c)] =
          cur[static_cast<std::size_t>(c - 1)] +
          params.rate.value(s, static_cast<double>(window_left + c - 1) / n);
    if (j > 0) {
      const auto row = static_cast<std::size_t>(j) * static_cast<std::size_t>(cols_);
      const auto prow = row - static_cast<std::size_t>(cols_);
      for (long c = 0; c < cols_; ++c)
        data_[row + static_cast<std::size_t>(c)] =
            data_[prow + static_cast<std::size_t>(c)] +
            0.5 * dt * (prev[static_cast<std::size_t>(c)] + cur[static_cast<std::size_t>(c)]);
    }
    prev.swap(cur);
  }
}

double ShiftIntensityTable::prefix_upto(double t, long x) const {
  if (data_.empty() || t <= 0.0) return 0.0;
  const long c = std::clamp<long>(x + 1, 0, cols_ - 1);
  const double pos = std::min(t, horizon_) / horizon_ * static_cast<double>(points_ - 1);
  const auto j = std::min<std::size_t>(static_cast<std::size_t>(pos),
                                       static_cast<std::size_t>(points_ - 2));
  const double w = pos - static_cast<double>(j);
  const auto row = j * static_cast<std::size_t>(cols_);
  const auto next = row + static_cast<std::size_t>(cols_);
  return data_[row + static_cast<std::size_t>(c)] * (1.0 - w) +
         data_[next + static_cast<std::size_t>(c)] * w;
}

std::vector<double> martingale_path(const EprsTrajectory& record, const TestFunction& H,
                                    const SimParams& params,
                                    const std::vector<double>& eval_times,
                                    const ShiftIntensityTable* shared_table) {
  Replay replay(record, H, params, shared_table);
  auto pairs = replay.run(eval_times);
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [m, q] : pairs) out.push_back(m);
  return out;
}

std::vector<double> quadratic_variation_path(const EprsTrajectory& record,
                                             const TestFunction& H, const SimParams& params,
                                             const std::vector<double>& eval_times,
                                             const ShiftIntensityTable* shared_table) {
  Replay replay(record, H, params, shared_table);
  auto pairs = replay.run(eval_times);
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [m, q] : pairs) out.push_back(q);
  return out;
}

double carre_du_champ_rate(const ExclusionConfig& config, const TestFunction& H, double s,
                           const SimParams& params) {
  const double n = static_cast<double>(params.N);
  const long cells = config.size();
  const double mod = H.modulation()(s);
  double acc = 0.0;
  for (long i = 0; i < cells; ++i) {
    for (int z = 1; z <= params.kernel.range() && i + z < cells; ++z) {
      if (config.at_index(i) == config.at_index(i + z)) continue;
      const double ha = H(static_cast<double>(config.window_left() + i) / n);
      const double hb = H(static_cast<double>(config.window_left() + i + z) / n);
      const double df = mod * (hb - ha) / n;
      acc += n * n * params.kernel.prob(z) * df * df;
    }
  }
  if (params.rate.is_zero()) return acc;
  std::vector<double> suffix(static_cast<std::size_t>(cells) + 1, 0.0);
  for (long i = cells - 1; i >= 0; --i) {
    const double gi = H(static_cast<double>(config.window_left() + i) / n);
    const double gn =
        i + 1 < cells ? H(static_cast<double>(config.window_left() + i + 1) / n) : 0.0;
    suffix[static_cast<std::size_t>(i)] =
        suffix[static_cast<std::size_t>(i + 1)] + (config.at_index(i) ? n * (gn - gi) : 0.0);
  }
  const double n2 = n * n;
  for (long i = 0; i < cells; ++i) {
    const double df = mod * suffix[static_cast<std::size_t>(i)] / n2;
    acc += params.rate.value(s, static_cast<double>(config.window_left() + i) / n) * df * df;
  }
  const double df0 = mod * suffix[0] / n2;
  acc += left_tail_rate(params.rate, s, config.window_left(), n) * df0 * df0;
  return acc;
}

QuavarPrintedTerms quavar_printed_rate(const ExclusionConfig& config, const TestFunction& H,
                                       double s, const SimParams& params) {
  const double n = static_cast<double>(params.N);
  const long cells = config.size();
  const long wl = config.window_left();
  const double mod = H.modulation()(s);
  QuavarPrintedTerms out;

  auto hval = [&](long i) { return mod * H(static_cast<double>(wl + i) / n); };
  auto grad = [&](long i) {
    const double next = i + 1 < cells ? hval(i + 1) : 0.0;
    return n * (next - hval(i));
  };

  // exchange line: ordered pairs with the telescoping gradient sum written out
  for (long x = 0; x < cells; ++x) {
    if (config.at_index(x) != 1) continue;
    for (int z = 1; z <= params.kernel.range(); ++z) {
      for (long y : {x + z, x - z}) {
        if (y < 0 || y >= cells || config.at_index(y) != 0) continue;
        double inner = 0.0;
        for (long w = std::min(x, y); w < std::max(x, y); ++w) inner += grad(w);
        out.exchange += params.kernel.prob(z) * inner * inner / (n * n);
      }
    }
  }

  if (params.rate.is_zero()) return out;

  // a^N(s, z) = N^{-1} sum_{x <= z} b(s, x/N), exterior tail included
  std::vector<double> an(static_cast<std::size_t>(cells));
  double run = left_tail_rate(params.rate, s, wl, n);
  for (long i = 0; i < cells; ++i) {
    run += params.rate.value(s, static_cast<double>(wl + i) / n);
    an[static_cast<std::size_t>(i)] = run / n;
  }
  const double n3 = n * n * n;
  std::vector<long> occupied;
  for (long i = 0; i < cells; ++i)
    if (config.at_index(i)) occupied.push_back(i);

  for (long z : occupied) {
    const double gz = grad(z);
    out.shift_square += an[static_cast<std::size_t>(z)] * gz * gz / n3;
  }
  for (long z : occupied) {
    const double gz = grad(z);
    if (gz == 0.0) continue;
    for (long w : occupied) {
      if (w == z) continue;
      const double gw = grad(w);
      if (gw == 0.0) continue;
      out.shift_cross += an[static_cast<std::size_t>(std::min(z, w))] * gz * gw / n3;
    }
  }
  for (long z : occupied) {
    for (long w : occupied) {
      if (w == z) continue;
      const long lo = std::min(z, w), hi = std::max(z, w);
      const double h_hi = hval(hi);
      const double g_lo = grad(lo);
      if (h_hi == 0.0 || g_lo == 0.0) continue;
      double between = 0.0;
      for (long x = lo + 1; x <= hi - 1; ++x)
        between += params.rate.value(s, static_cast<double>(wl + x) / n);
      out.shift_extra -= between * h_hi * g_lo / n3;
    }
  }
  return out;
}

}  // namespace exspread
