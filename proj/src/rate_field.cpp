#include "exspread/rate_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "exspread/jump_kernel.hpp"
#include "exspread/quadrature.hpp"

namespace exspread {

namespace {
constexpr double kTailTolFactor = 1e-11;   // tail bound relative to the envelope scale
constexpr double kSimpsonTolFactor = 1e-12;
constexpr double kMaxTruncRadius = 1e6;
}  // namespace

double TimeModulation::operator()(double t) const {
  return base + amp * std::cos(omega * t + phase);
}

double TimeModulation::sup() const { return base + std::abs(amp); }

bool TimeModulation::is_constant() const { return amp == 0.0 || omega == 0.0; }

double TimeModulation::integral(double t0, double t1) const {
  if (is_constant()) return (*this)(0.5 * (t0 + t1)) * (t1 - t0);
  return base * (t1 - t0) +
         amp / omega * (std::sin(omega * t1 + phase) - std::sin(omega * t0 + phase));
}

double TimeModulation::integral_sq(double t0, double t1) const {
  if (is_constant()) {
    const double m = (*this)(0.5 * (t0 + t1));
    return m * m * (t1 - t0);
  }
  // (base + amp cos x)^2 = base^2 + amp^2/2 + 2 base amp cos x + amp^2/2 cos 2x
  const double c = (base * base + 0.5 * amp * amp) * (t1 - t0);
  const double s1 = 2.0 * base * amp / omega *
                    (std::sin(omega * t1 + phase) - std::sin(omega * t0 + phase));
  const double s2 = 0.25 * amp * amp / omega *
                    (std::sin(2.0 * (omega * t1 + phase)) - std::sin(2.0 * (omega * t0 + phase)));
  return c + s1 + s2;
}

double TimeModulation::derivative(double t) const {
  return -amp * omega * std::sin(omega * t + phase);
}

RateShape RateShape::double_exp(double amplitude, double center, double beta) {
  if (amplitude < 0.0) throw std::invalid_argument("rate_field.amplitude: must be >= 0");
  if (beta <= 0.0) throw std::invalid_argument("rate_field.beta: must be > 0");
  RateShape s;
  s.family_ = Family::DoubleExp;
  s.amplitude_ = amplitude;
  s.center_ = center;
  s.param_ = beta;
  s.derive_envelope();
  s.build_prefix_table();
  return s;
}

RateShape RateShape::gaussian(double amplitude, double center, double width) {
  if (amplitude < 0.0) throw std::invalid_argument("rate_field.amplitude: must be >= 0");
  if (width <= 0.0) throw std::invalid_argument("rate_field.width: must be > 0");
  RateShape s;
  s.family_ = Family::Gaussian;
  s.amplitude_ = amplitude;
  s.center_ = center;
  s.param_ = width;
  s.derive_envelope();
  s.build_prefix_table();
  return s;
}

RateShape RateShape::tabulated(std::vector<double> nodes, std::vector<double> values,
                               double tail_beta) {
  if (nodes.size() < 2 || nodes.size() != values.size())
    throw std::invalid_argument("rate_field.table: need matching node/value arrays, >= 2 entries");
  if (!std::is_sorted(nodes.begin(), nodes.end()))
    throw std::invalid_argument("rate_field.table.nodes: must be increasing");
  for (double v : values)
    if (v < 0.0) throw std::invalid_argument("rate_field.table.values: must be >= 0");
  if (tail_beta <= 0.0) throw std::invalid_argument("rate_field.tail_beta: must be > 0");
  RateShape s;
  s.family_ = Family::Tabulated;
  s.tab_nodes_ = std::move(nodes);
  s.tab_values_ = std::move(values);
  s.param_ = tail_beta;
  s.derive_envelope();
  s.build_prefix_table();
  return s;
}

double RateShape::value(double u) const {
  switch (family_) {
    case Family::DoubleExp:
      return amplitude_ * std::exp(-param_ * std::abs(u - center_));
    case Family::Gaussian: {
      const double s = (u - center_) / param_;
      return amplitude_ * std::exp(-s * s);
    }
    case Family::Tabulated: {
      if (u <= tab_nodes_.front())
        return tab_values_.front() * std::exp(-param_ * (tab_nodes_.front() - u));
      if (u >= tab_nodes_.back())
        return tab_values_.back() * std::exp(-param_ * (u - tab_nodes_.back()));
      const auto it = std::upper_bound(tab_nodes_.begin(), tab_nodes_.end(), u);
      const auto i = static_cast<std::size_t>(it - tab_nodes_.begin());
      const double x0 = tab_nodes_[i - 1], x1 = tab_nodes_[i];
      const double w = (u - x0) / (x1 - x0);
      return tab_values_[i - 1] * (1.0 - w) + tab_values_[i] * w;
    }
  }
  return 0.0;
}

void RateShape::derive_envelope() {
  switch (family_) {
    case Family::DoubleExp:
      env_beta_ = param_;
      env_c_ = amplitude_ * std::exp(param_ * std::abs(center_));
      break;
    case Family::Gaussian:
      // A exp(-s^2) <= A exp(|mu|/w + 1/4) exp(-|u|/w)
      env_beta_ = 1.0 / param_;
      env_c_ = amplitude_ * std::exp(std::abs(center_) / param_ + 0.25);
      break;
    case Family::Tabulated: {
      env_beta_ = param_;
      double c = 0.0;
      for (std::size_t i = 0; i < tab_nodes_.size(); ++i)
        c = std::max(c, tab_values_[i] * std::exp(param_ * std::abs(tab_nodes_[i])));
      env_c_ = c;
      break;
    }
  }
  if (env_c_ == 0.0) env_beta_ = 1.0;
}

void RateShape::build_prefix_table() {
  if (env_c_ == 0.0) {
    trunc_radius_ = 0.0;
    total_ = 0.0;
    return;
  }
  const double scale = env_c_ / env_beta_;
  const double tail_tol = kTailTolFactor * scale;
  // envelope tail beyond U: env_c * exp(-beta U) / beta <= tail_tol
  double radius = std::log(scale / tail_tol) / env_beta_;
  radius = std::max(radius, 1.0);
  if (radius > kMaxTruncRadius ||
      scale * std::exp(-env_beta_ * std::min(radius, kMaxTruncRadius)) > tail_tol) {
    throw std::runtime_error("rate field: envelope tail truncation bound exceeds tolerance");
  }
  trunc_radius_ = radius;

  // node set: uniform grid over [-U, U] plus the shape's kink locations
  std::vector<double> nodes;
  const int uniform_count = 4097;
  nodes.reserve(static_cast<std::size_t>(uniform_count) + tab_nodes_.size() + 1);
  for (int i = 0; i < uniform_count; ++i)
    nodes.push_back(-radius + 2.0 * radius * static_cast<double>(i) /
                                  static_cast<double>(uniform_count - 1));
  if (family_ == Family::DoubleExp) nodes.push_back(center_);
  for (double x : tab_nodes_)
    if (x > -radius && x < radius) nodes.push_back(x);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  prefix_nodes_ = std::move(nodes);
  prefix_values_.resize(prefix_nodes_.size());
  const double seg_tol = kSimpsonTolFactor * scale / static_cast<double>(prefix_nodes_.size());
  const auto f = [this](double u) { return value(u); };
  double acc = 0.0;
  prefix_values_[0] = 0.0;
  for (std::size_t i = 1; i < prefix_nodes_.size(); ++i) {
    acc += adaptive_simpson(f, prefix_nodes_[i - 1], prefix_nodes_[i], seg_tol);
    prefix_values_[i] = acc;
  }
  total_ = acc;
}

double RateShape::prefix(double u) const {
  if (env_c_ == 0.0) return 0.0;
  if (u <= prefix_nodes_.front()) return 0.0;
  if (u >= prefix_nodes_.back()) return total_;
  const auto it = std::upper_bound(prefix_nodes_.begin(), prefix_nodes_.end(), u);
  const auto i = static_cast<std::size_t>(it - prefix_nodes_.begin());
  const double scale = env_c_ / env_beta_;
  const auto f = [this](double x) { return value(x); };
  return prefix_values_[i - 1] +
         adaptive_simpson(f, prefix_nodes_[i - 1], u, kSimpsonTolFactor * scale);
}

double RateShape::sup_on(double lo, double hi) const {
  if (lo > hi) std::swap(lo, hi);
  switch (family_) {
    case Family::DoubleExp:
    case Family::Gaussian: {
      const double arg = std::clamp(center_, lo, hi);
      return value(arg);
    }
    case Family::Tabulated: {
      double m = std::max(value(lo), value(hi));
      for (std::size_t i = 0; i < tab_nodes_.size(); ++i)
        if (tab_nodes_[i] >= lo && tab_nodes_[i] <= hi) m = std::max(m, tab_values_[i]);
      // exponential tails are monotone toward the table, endpoints suffice there
      return m;
    }
  }
  return 0.0;
}

DriftCurve::DriftCurve(std::vector<double> values, double horizon)
    : values_(std::move(values)), horizon_(horizon) {
  if (values_.size() < 2) throw std::invalid_argument("DriftCurve: need >= 2 samples");
  if (horizon_ <= 0.0) throw std::invalid_argument("DriftCurve: horizon must be > 0");
  if (values_.front() != 0.0) throw std::invalid_argument("DriftCurve: D(0) must be 0");
  for (std::size_t i = 1; i < values_.size(); ++i)
    if (values_[i] < values_[i - 1])
      throw std::invalid_argument("DriftCurve: must be nondecreasing");
}

double DriftCurve::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= horizon_) return values_.back();
  const double pos = t / horizon_ * static_cast<double>(values_.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(i);
  return values_[i] * (1.0 - w) + values_[i + 1] * w;
}

RateField::RateField(RateShape shape, TimeModulation mod,
                     std::shared_ptr<const DriftCurve> drift)
    : shape_(std::move(shape)), mod_(mod), drift_(std::move(drift)) {
  if (mod_.base < std::abs(mod_.amp) || mod_.base < 0.0)
    throw std::invalid_argument("rate_field.modulation: base must dominate |amp|");
  env_beta_ = shape_.envelope_beta();
  env_c_ = shape_.envelope_c() * mod_.sup();
  if (drift_) env_c_ *= std::exp(env_beta_ * drift_->max());
}

RateField RateField::zero() { return RateField(RateShape::double_exp(0.0, 0.0, 1.0)); }

double RateField::value(double t, double u) const {
  const double shift = drift_ ? (*drift_)(t) : 0.0;
  return mod_(t) * shape_.value(u - shift);
}

double RateField::prefix(double t, double u) const {
  const double shift = drift_ ? (*drift_)(t) : 0.0;
  return mod_(t) * shape_.prefix(u - shift);
}

double RateField::total_mass(double t) const { return mod_(t) * shape_.total(); }

double RateField::time_sup(double u) const {
  const double dmax = drift_ ? drift_->max() : 0.0;
  return mod_.sup() * shape_.sup_on(u - dmax, u);
}

RateField RateField::with_drift(std::shared_ptr<const DriftCurve> drift) const {
  return RateField(shape_, mod_, std::move(drift));
}

double total_mass(const RateField& field, double t) { return field.total_mass(t); }

RateField b_from_h(const RateField& h, double horizon, int time_points) {
  if (time_points < 1000) time_points = 1000;
  auto half_mass = [&h](double s) { return 0.5 * h.total_mass(s); };
  auto drift = std::make_shared<const DriftCurve>(
      cumulative_trapezoid(half_mass, horizon, time_points), horizon);
  return h.with_drift(std::move(drift));
}

double a_field(const RateField& b, double t, double u) { return b.prefix(t, u); }

double gamma_field(const RateField& h, double t, double u) {
  return 2.0 * h.prefix(t, u) - h.total_mass(t);
}

MacroCoefficients::MacroCoefficients(const JumpKernel& kernel, RateField h, double horizon,
                                     int time_points)
    : sigma_sq_(kernel.sigma_sq()), horizon_(horizon), h_(std::move(h)), b_(RateField::zero()) {
  if (horizon_ <= 0.0) throw std::invalid_argument("MacroCoefficients: horizon must be > 0");
  if (time_points < 1000) time_points = 1000;
  auto half_mass = [this](double s) { return 0.5 * h_.total_mass(s); };
  drift_ = std::make_shared<const DriftCurve>(
      cumulative_trapezoid(half_mass, horizon_, time_points), horizon_);
  b_ = h_.with_drift(drift_);
}

double MacroCoefficients::sup_C() const { return h_.modulation().sup() * h_.shape().total(); }

}  // namespace exspread
