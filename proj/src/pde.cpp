#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "exspread/convdiff.hpp"
#include "exspread/csvio.hpp"

namespace exspread {

long PdeGrid::cells() const {
  if (!(u_max > u_min) || !(du > 0.0)) throw std::invalid_argument("grid: need u_max > u_min, du > 0");
  const long n = static_cast<long>(std::llround((u_max - u_min) / du));
  if (n < 4) throw std::invalid_argument("grid: too few cells");
  return n;
}

GridFunction::GridFunction(PdeGrid grid, std::vector<double> times,
                           std::vector<std::vector<double>> values, std::string tag)
    : grid_(grid), times_(std::move(times)), values_(std::move(values)), tag_(std::move(tag)) {
  if (times_.size() != values_.size())
    throw std::invalid_argument("GridFunction: times/values size mismatch");
  const auto n = static_cast<std::size_t>(grid_.cells());
  for (const auto& row : values_) {
    if (row.size() != n) throw std::invalid_argument("GridFunction: row size mismatch");
    for (double v : row) {
      if (!std::isfinite(v)) throw std::runtime_error("GridFunction: non-finite value");
      if (v < -1e-6 || v > 1.0 + 1e-6)
        throw std::runtime_error("GridFunction: density bound [0,1] violated");
    }
  }
}

std::size_t GridFunction::time_index(double t) const {
  for (std::size_t i = 0; i < times_.size(); ++i)
    if (std::abs(times_[i] - t) <= 1e-9) return i;
  throw std::invalid_argument("GridFunction: time not stored");
}

double GridFunction::interpolate(std::size_t ti, double u) const {
  const auto& v = values_[ti];
  const long n = grid_.cells();
  const double pos = (u - grid_.center(0)) / grid_.du;
  if (pos <= 0.0) return v.front();
  if (pos >= static_cast<double>(n - 1)) return v.back();
  const auto i = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(i);
  return v[i] * (1.0 - w) + v[i + 1] * w;
}

double GridFunction::total_mass(std::size_t ti) const {
  double acc = 0.0;
  for (double v : values_[ti]) acc += v;
  return acc * grid_.du;
}

void GridFunction::write_csv(std::ostream& os) const {
  os << "t";
  for (long i = 0; i < grid_.cells(); ++i) os << ',' << format_double(grid_.center(i));
  os << '\n';
  for (std::size_t k = 0; k < times_.size(); ++k) {
    os << format_double(times_[k]);
    for (double v : values_[k]) os << ',' << format_double(v);
    os << '\n';
  }
}

namespace detail {

void convdiff_fluxes(const double* v, const double* vel_face, long n, double sigma_sq, double du,
                     double* flux) {
  flux[0] = 0.0;
  flux[n] = 0.0;
#pragma omp parallel for schedule(static)
  for (long i = 1; i < n; ++i) {
    const double vel = vel_face ? vel_face[i] : 0.0;
    const double adv = vel >= 0.0 ? vel * v[i - 1] : vel * v[i];
    flux[i] = adv - sigma_sq * (v[i] - v[i - 1]) / du;
  }
}

void apply_fluxes_serial(const double* v, const double* flux, const double* src, long n,
                         double dt, double du, double* out) {
  const double lam = dt / du;
  for (long i = 0; i < n; ++i)
    out[i] = v[i] - lam * (flux[i + 1] - flux[i]) + (src ? dt * src[i] : 0.0);
}

void apply_fluxes_parallel(const double* v, const double* flux, const double* src, long n,
                           double dt, double du, double* out) {
  const double lam = dt / du;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i)
    out[i] = v[i] - lam * (flux[i + 1] - flux[i]) + (src ? dt * src[i] : 0.0);
}

}  // namespace detail

GridFunction solve_convdiff(const ConvDiffProblem& problem, const PdeGrid& grid, double horizon,
                            const std::vector<double>& snapshot_times,
                            const SolverOptions& options) {
  if (horizon <= 0.0) throw std::invalid_argument("solve_convdiff: horizon must be > 0");
  if (!problem.init) throw std::invalid_argument("solve_convdiff: missing initial profile");
  if (problem.sigma_sq < 0.0) throw std::invalid_argument("solve_convdiff: sigma_sq < 0");
  if (problem.drift && problem.drift_max <= 0.0)
    throw std::invalid_argument("solve_convdiff: drift requires a positive drift_max bound");

  const long n = grid.cells();
  const double du = grid.du;

  const double diff_limit =
      problem.sigma_sq > 0.0 ? du * du / (2.0 * problem.sigma_sq)
                             : std::numeric_limits<double>::infinity();
  const double adv_limit = problem.drift ? du / problem.drift_max
                                         : std::numeric_limits<double>::infinity();
  double dt = options.dt;
  if (dt > 0.0) {
    if (dt > 0.9 * std::min(diff_limit, adv_limit))
      throw std::invalid_argument("solve_convdiff: dt violates the CFL bound");
  } else {
    // monotone combination: 2 mu + lambda vmax <= 0.9
    const double denom = 2.0 * problem.sigma_sq / (du * du) +
                         (problem.drift ? problem.drift_max / du : 0.0);
    if (denom <= 0.0) throw std::invalid_argument("solve_convdiff: degenerate problem");
    dt = 0.9 / denom;
  }

  std::vector<double> times = snapshot_times;
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  if (times.empty()) times.push_back(horizon);
  if (times.front() < 0.0 || times.back() > horizon + 1e-12)
    throw std::invalid_argument("solve_convdiff: snapshot times outside [0, horizon]");

  std::vector<double> v(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = problem.init(grid.center(i));

  std::vector<double> next(v.size());
  std::vector<double> flux(static_cast<std::size_t>(n) + 1);
  std::vector<double> vel(problem.drift ? static_cast<std::size_t>(n) + 1 : 0);
  std::vector<double> src(problem.source ? static_cast<std::size_t>(n) : 0);

  std::vector<std::vector<double>> out_values;
  out_values.reserve(times.size());

  double t = 0.0;
  for (double boundary : times) {
    const double seg = boundary - t;
    const long steps = seg > 0.0 ? std::max<long>(1, static_cast<long>(std::ceil(seg / dt))) : 0;
    const double dtk = steps > 0 ? seg / static_cast<double>(steps) : 0.0;
    for (long s = 0; s < steps; ++s) {
      if (problem.drift) {
        double vmax = 0.0;
        for (long i = 1; i < n; ++i) {
          vel[static_cast<std::size_t>(i)] =
              problem.drift(t, grid.u_min + static_cast<double>(i) * du);
          vmax = std::max(vmax, std::abs(vel[static_cast<std::size_t>(i)]));
        }
        if (vmax > problem.drift_max * (1.0 + 1e-9))
          throw std::runtime_error("solve_convdiff: drift exceeds its declared bound");
      }
      if (problem.source)
        for (long i = 0; i < n; ++i)
          src[static_cast<std::size_t>(i)] = problem.source(t, grid.center(i));

      detail::convdiff_fluxes(v.data(), problem.drift ? vel.data() : nullptr, n,
                              problem.sigma_sq, du, flux.data());
      if (options.parallel)
        detail::apply_fluxes_parallel(v.data(), flux.data(),
                                      problem.source ? src.data() : nullptr, n, dtk, du,
                                      next.data());
      else
        detail::apply_fluxes_serial(v.data(), flux.data(),
                                    problem.source ? src.data() : nullptr, n, dtk, du,
                                    next.data());
      v.swap(next);
      t += dtk;
      for (double x : v)
        if (!(x > -1e-6) || !(x < 1.0 + 1e-6))
          throw std::runtime_error("solve_convdiff: solution left the [0,1] density bounds");
    }
    t = boundary;
    out_values.push_back(v);
  }
  return GridFunction(grid, std::move(times), std::move(out_values), options.tag);
}

namespace {

// uniform samples of a smooth function with linear interpolation, clamped ends
struct SampledCurve {
  double lo = 0.0;
  double step = 1.0;
  std::vector<double> vals;

  template <typename F>
  static SampledCurve build(F&& f, double lo, double hi, double step) {
    SampledCurve c;
    c.lo = lo;
    c.step = step;
    const long n = static_cast<long>(std::ceil((hi - lo) / step)) + 1;
    c.vals.resize(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
      c.vals[static_cast<std::size_t>(i)] = f(lo + static_cast<double>(i) * step);
    return c;
  }

  double at(double u) const {
    const double pos = (u - lo) / step;
    if (pos <= 0.0) return vals.front();
    if (pos >= static_cast<double>(vals.size() - 1)) return vals.back();
    const auto i = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(i);
    return vals[i] * (1.0 - w) + vals[i + 1] * w;
  }
};

}  // namespace

GridFunction solve_eprs_pde(const MacroCoefficients& coeffs,
                            const std::function<double(double)>& zeta0, const PdeGrid& grid,
                            const std::vector<double>& snapshot_times,
                            const SolverOptions& options) {
  const RateField& h = coeffs.h();
  const double dmax = coeffs.D(coeffs.horizon());
  ConvDiffProblem problem;
  problem.sigma_sq = coeffs.sigma_sq();
  problem.init = zeta0;
  if (!h.is_zero()) {
    auto prefix = SampledCurve::build([&](double u) { return h.shape().prefix(u); },
                                      grid.u_min - dmax - 1.0, grid.u_max + 1.0, grid.du / 4.0);
    const TimeModulation mod = h.modulation();
    const MacroCoefficients* mc = &coeffs;
    problem.drift = [prefix = std::move(prefix), mod, mc](double t, double u) {
      return mod(t) * prefix.at(u - mc->D(t));
    };
    problem.drift_max = coeffs.sup_C();
  }
  return solve_convdiff(problem, grid, coeffs.horizon(), snapshot_times, options);
}

GridFunction solve_epcs_pde(const MacroCoefficients& coeffs,
                            const std::function<double(double)>& rho0, const PdeGrid& grid,
                            const std::vector<double>& snapshot_times,
                            const SolverOptions& options) {
  const RateField& h = coeffs.h();
  ConvDiffProblem problem;
  problem.sigma_sq = coeffs.sigma_sq();
  problem.init = rho0;
  if (!h.is_zero()) {
    auto prefix = SampledCurve::build([&](double u) { return h.shape().prefix(u); },
                                      grid.u_min - 1.0, grid.u_max + 1.0, grid.du / 4.0);
    auto value = SampledCurve::build([&](double u) { return h.shape().value(u); },
                                     grid.u_min - 1.0, grid.u_max + 1.0, grid.du / 4.0);
    const TimeModulation mod = h.modulation();
    const double half_total = 0.5 * h.shape().total();
    // gamma/2 = m(t) (prefix(u) - total/2); sign flips at the mass center
    problem.drift = [prefix = std::move(prefix), mod, half_total](double t, double u) {
      return mod(t) * (prefix.at(u) - half_total);
    };
    problem.drift_max = 0.5 * coeffs.sup_C();
    problem.source = [value = std::move(value), mod](double t, double u) {
      return mod(t) * value.at(u);
    };
  }
  return solve_convdiff(problem, grid, coeffs.horizon(), snapshot_times, options);
}

GridFunction transform_solution(const GridFunction& zeta, const DriftCurve& drift,
                                const PdeGrid& out_grid) {
  const auto& times = zeta.times();
  std::vector<std::vector<double>> values;
  values.reserve(times.size());
  const double src_hi = zeta.grid().center(zeta.cells() - 1);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double shift = drift(times[k]);
    if (out_grid.center(out_grid.cells() - 1) + shift > src_hi + 1e-9)
      throw std::invalid_argument("transform_solution: shift exceeds the source grid margin");
    std::vector<double> row(static_cast<std::size_t>(out_grid.cells()));
    for (long i = 0; i < out_grid.cells(); ++i)
      row[static_cast<std::size_t>(i)] =
          1.0 - zeta.interpolate(k, out_grid.center(i) + shift);
    values.push_back(std::move(row));
  }
  return GridFunction(out_grid, times, std::move(values), zeta.tag() + ":transformed");
}

}  // namespace exspread
