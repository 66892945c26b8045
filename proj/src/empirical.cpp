#include <cmath>
#include <stdexcept>

#include "exspread/empirical.hpp"
#include "exspread/quadrature.hpp"

namespace exspread {

namespace {
double checked_probability(double p, double u) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("initial profile: value outside [0,1] at u=" + std::to_string(u));
  return p;
}
}  // namespace

ExclusionConfig sample_bernoulli_profile(const Profile& rho0, const SimParams& params, Rng& rng) {
  ExclusionConfig config = make_eprs_window(params);
  const double n = static_cast<double>(params.N);
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(config.size()));
  for (long i = 0; i < config.size(); ++i) {
    const double u = static_cast<double>(config.window_left() + i) / n;
    cells[static_cast<std::size_t>(i)] =
        rng.bernoulli(checked_probability(rho0(u), u)) ? 1 : 0;
  }
  return ExclusionConfig(config.window_left(), std::move(cells));
}

SpreadConfig sample_bernoulli_profile_epcs(const Profile& rho0, const SimParams& params,
                                           Rng& rng) {
  SpreadConfig config = make_epcs_window(params);
  const double n2 = 2.0 * static_cast<double>(params.N);
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(config.size()));
  for (long i = 0; i < config.size(); ++i) {
    const double u = static_cast<double>(config.position_half(i)) / n2;
    cells[static_cast<std::size_t>(i)] =
        rng.bernoulli(checked_probability(rho0(u), u)) ? 1 : 0;
  }
  return SpreadConfig(config.anchor_half(), std::move(cells));
}

namespace {

void check_support(double lo, double hi, double win_lo, double win_hi) {
  if (lo < win_lo - 1e-12 || hi > win_hi + 1e-12)
    throw std::invalid_argument("empirical_pair: test function support exceeds the window");
}

}  // namespace

double empirical_pair(const ExclusionConfig& config, double support_lo, double support_hi,
                      const std::function<double(double)>& g, int N) {
  const double n = static_cast<double>(N);
  check_support(support_lo, support_hi, static_cast<double>(config.window_left()) / n,
                static_cast<double>(config.window_right()) / n);
  double acc = 0.0;
  for (long i = 0; i < config.size(); ++i)
    if (config.at_index(i))
      acc += g(static_cast<double>(config.window_left() + i) / n);
  return acc / n;
}

double empirical_pair(const SpreadConfig& config, double support_lo, double support_hi,
                      const std::function<double(double)>& g, int N) {
  const double n2 = 2.0 * static_cast<double>(N);
  check_support(support_lo, support_hi,
                static_cast<double>(config.first_position_half()) / n2,
                static_cast<double>(config.last_position_half()) / n2);
  double acc = 0.0;
  for (long i = 0; i < config.size(); ++i)
    if (config.at_index(i))
      acc += g(static_cast<double>(config.position_half(i)) / n2);
  return acc / static_cast<double>(N);
}

double empirical_pair(const ExclusionConfig& config, const TestFunction& g, int N) {
  return empirical_pair(config, g.support_lo(), g.support_hi(),
                        [&g](double u) { return g(u); }, N);
}

double empirical_pair(const SpreadConfig& config, const TestFunction& g, int N) {
  return empirical_pair(config, g.support_lo(), g.support_hi(),
                        [&g](double u) { return g(u); }, N);
}

double wlln_statistic(const EprsTrajectory& record, double t) {
  for (std::size_t k = 0; k < record.snapshot_times.size(); ++k) {
    if (std::abs(record.snapshot_times[k] - t) <= 1e-9) {
      long total = 0;
      for (long w : record.shift_counts_at[k]) total += w;
      total += static_cast<long>(record.totals_at[k].exterior_left +
                                 record.totals_at[k].exterior_right);
      return static_cast<double>(total) / static_cast<double>(record.N);
    }
  }
  throw std::invalid_argument("wlln_statistic: t is not a stored snapshot time");
}

double wlln_target(const RateField& rate, double t) {
  if (t <= 0.0) return 0.0;
  return cumulative_trapezoid([&rate](double s) { return rate.total_mass(s); }, t, 2049).back();
}

EnsembleStats::EnsembleStats(std::string tag, std::vector<double> times,
                             std::vector<std::string> fn_ids)
    : tag_(std::move(tag)), times_(std::move(times)), fn_ids_(std::move(fn_ids)) {
  cells_.resize(times_.size() * fn_ids_.size());
}

void EnsembleStats::add_replica(const std::vector<std::vector<double>>& values) {
  if (values.size() != times_.size())
    throw std::invalid_argument("EnsembleStats: replica row count mismatch");
  for (std::size_t ti = 0; ti < times_.size(); ++ti) {
    if (values[ti].size() != fn_ids_.size())
      throw std::invalid_argument("EnsembleStats: replica column count mismatch");
    for (std::size_t fi = 0; fi < fn_ids_.size(); ++fi)
      cells_[ti * fn_ids_.size() + fi].add(values[ti][fi]);
  }
  ++replicas_;
}

void EnsembleStats::merge(const EnsembleStats& other) {
  if (other.tag_ != tag_ || other.times_ != times_ || other.fn_ids_ != fn_ids_)
    throw std::invalid_argument("EnsembleStats: merging mismatched experiments");
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i].merge(other.cells_[i]);
  replicas_ += other.replicas_;
}

const RunningStat& EnsembleStats::cell(std::size_t time_index, std::size_t fn_index) const {
  return cells_.at(time_index * fn_ids_.size() + fn_index);
}

}  // namespace exspread
