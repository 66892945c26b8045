#ifndef EXSPREAD_RATE_FIELD_HPP
#define EXSPREAD_RATE_FIELD_HPP

#include <memory>
#include <string>
#include <vector>

namespace exspread {

// Bounded smooth multiplier m(t) = base + amp * cos(omega t + phase), base >= |amp|.
struct TimeModulation {
  double base = 1.0;
  double amp = 0.0;
  double omega = 0.0;
  double phase = 0.0;

  double operator()(double t) const;
  double sup() const;
  bool is_constant() const;
  double integral(double t0, double t1) const;     // of m
  double integral_sq(double t0, double t1) const;  // of m^2
  double derivative(double t) const;
};

// Spatial profile of a rate field. Families: double exponential
// A exp(-beta|u-mu|), Gaussian bump A exp(-((u-mu)/w)^2), and a tabulated
// profile (linear inside its grid, exponential tails outside).
// prefix() integrates by adaptive Simpson on an envelope-truncated interval,
// accumulated once into a node table at construction.
class RateShape {
 public:
  enum class Family { DoubleExp, Gaussian, Tabulated };

  static RateShape double_exp(double amplitude, double center, double beta);
  static RateShape gaussian(double amplitude, double center, double width);
  static RateShape tabulated(std::vector<double> nodes, std::vector<double> values,
                             double tail_beta);

  double value(double u) const;
  double prefix(double u) const;  // integral over (-inf, u]
  double total() const { return total_; }
  double sup_on(double lo, double hi) const;
  double envelope_c() const { return env_c_; }
  double envelope_beta() const { return env_beta_; }
  bool is_zero() const { return total_ == 0.0 && env_c_ == 0.0; }
  Family family() const { return family_; }

 private:
  RateShape() = default;
  void derive_envelope();
  void build_prefix_table();

  Family family_ = Family::DoubleExp;
  double amplitude_ = 0.0;
  double center_ = 0.0;
  double param_ = 1.0;  // beta (DoubleExp) or width (Gaussian) or tail beta (Tabulated)
  std::vector<double> tab_nodes_;
  std::vector<double> tab_values_;

  double env_c_ = 0.0;
  double env_beta_ = 1.0;
  double trunc_radius_ = 0.0;
  double total_ = 0.0;
  std::vector<double> prefix_nodes_;
  std::vector<double> prefix_values_;
};

// Nondecreasing drift curve t -> D(t) on [0,T], stored on a uniform grid.
class DriftCurve {
 public:
  DriftCurve(std::vector<double> values, double horizon);
  double operator()(double t) const;  // clamped linear interpolation
  double horizon() const { return horizon_; }
  double max() const { return values_.back(); }

 private:
  std::vector<double> values_;
  double horizon_ = 0.0;
};

// Space-time rate, value(t,u) = m(t) * shape(u - D(t)). All fields satisfy the
// declared exponential envelope value(t,u) <= envelope_c * exp(-envelope_beta |u|).
class RateField {
 public:
  RateField(RateShape shape, TimeModulation mod = {},
            std::shared_ptr<const DriftCurve> drift = nullptr);

  static RateField zero();

  double value(double t, double u) const;
  // integral of value(t, .) over (-inf, u]
  double prefix(double t, double u) const;
  // C(t), the instantaneous total mass rate
  double total_mass(double t) const;
  // upper bound for sup_{s in [0, horizon]} value(s, u), tight for unimodal shapes
  double time_sup(double u) const;

  double envelope_c() const { return env_c_; }
  double envelope_beta() const { return env_beta_; }
  bool is_zero() const { return shape_.is_zero() || mod_.sup() == 0.0; }
  bool time_constant() const { return mod_.is_constant() && drift_ == nullptr; }

  const RateShape& shape() const { return shape_; }
  const TimeModulation& modulation() const { return mod_; }
  const DriftCurve* drift() const { return drift_.get(); }

  RateField with_drift(std::shared_ptr<const DriftCurve> drift) const;

 private:
  RateShape shape_;
  TimeModulation mod_;
  std::shared_ptr<const DriftCurve> drift_;
  double env_c_ = 0.0;
  double env_beta_ = 1.0;
};

// C(t) for an arbitrary field (quadrature-backed through the shape total).
double total_mass(const RateField& field, double t);

// The right-shift rate obtained by composing h with its own cumulative
// half-mass drift D(t) = int_0^t C(s)/2 ds: b(t,u) = h(t, u - D(t)).
RateField b_from_h(const RateField& h, double horizon, int time_points = 2049);

// a(t,u) = integral of b(t, .) over (-inf, u]
double a_field(const RateField& b, double t, double u);

// gamma(t,u) = prefix - tail integral = 2 * prefix - C(t)
double gamma_field(const RateField& h, double t, double u);

// Bundles the kernel diffusivity and the macroscopic coefficient fields of a
// rate field h: C(t), D(t), b, a and gamma evaluators.
class JumpKernel;
class MacroCoefficients {
 public:
  MacroCoefficients(const JumpKernel& kernel, RateField h, double horizon,
                    int time_points = 2049);

  double sigma_sq() const { return sigma_sq_; }
  double horizon() const { return horizon_; }
  double C(double t) const { return h_.total_mass(t); }
  double D(double t) const { return (*drift_)(t); }
  double a(double t, double u) const { return b_.prefix(t, u); }
  double gamma(double t, double u) const { return 2.0 * h_.prefix(t, u) - h_.total_mass(t); }
  double sup_C() const;
  const RateField& h() const { return h_; }
  const RateField& b() const { return b_; }

 private:
  double sigma_sq_ = 0.0;
  double horizon_ = 0.0;
  RateField h_;
  std::shared_ptr<const DriftCurve> drift_;
  RateField b_;
};

}  // namespace exspread

#endif
