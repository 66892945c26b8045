#ifndef EXSPREAD_CONVDIFF_HPP
#define EXSPREAD_CONVDIFF_HPP

#include <functional>
#include <vector>

#include "exspread/grid_function.hpp"
#include "exspread/rate_field.hpp"

namespace exspread {

// Explicit finite-volume marching of
//   d/dt v = sigma^2 Laplacian v - d/du (drift v) + source
// with second-order central diffusion, first-order upwind conservative
// advection and no-flux boundaries. The automatic time step keeps the scheme
// monotone; a caller-supplied dt is rejected unless
// dt <= 0.9 min(du^2 / (2 sigma^2), du / max|drift|).
struct ConvDiffProblem {
  double sigma_sq = 0.5;
  std::function<double(double, double)> drift;   // (t, u) at cell faces; null = 0
  double drift_max = 0.0;                        // sup |drift|, used for the CFL bound
  std::function<double(double, double)> source;  // (t, u) at cell centers; null = 0
  std::function<double(double)> init;            // cell centers
};

struct SolverOptions {
  double dt = 0.0;        // <= 0 requests the automatic monotone step
  bool parallel = true;   // OpenMP cell updates; the serial path is the reference
  std::string tag;
};

GridFunction solve_convdiff(const ConvDiffProblem& problem, const PdeGrid& grid, double horizon,
                            const std::vector<double>& snapshot_times,
                            const SolverOptions& options = {});

// d/dt zeta = sigma^2 Lap zeta - d/du (a zeta) with a(t,u) from the
// right-shift coefficients of h.
GridFunction solve_eprs_pde(const MacroCoefficients& coeffs,
                            const std::function<double(double)>& zeta0, const PdeGrid& grid,
                            const std::vector<double>& snapshot_times,
                            const SolverOptions& options = {});

// d/dt rho = sigma^2 Lap rho - (1/2) d/du (gamma rho) + h.
GridFunction solve_epcs_pde(const MacroCoefficients& coeffs,
                            const std::function<double(double)>& rho0, const PdeGrid& grid,
                            const std::vector<double>& snapshot_times,
                            const SolverOptions& options = {});

// rho(t,u) = 1 - zeta(t, u + D(t)) on the requested output grid, interpolating
// linearly at off-grid arguments. Rejects shifts that leave the source grid.
GridFunction transform_solution(const GridFunction& zeta, const DriftCurve& drift,
                                const PdeGrid& out_grid);

namespace detail {
// One explicit step; exposed for the serial/parallel equivalence tests and the
// benchmark. flux[i] is the total flux at the left face of cell i (flux[0] and
// flux[n] are the no-flux boundaries).
void convdiff_fluxes(const double* v, const double* vel_face, long n, double sigma_sq, double du,
                     double* flux);
void apply_fluxes_serial(const double* v, const double* flux, const double* src, long n,
                         double dt, double du, double* out);
void apply_fluxes_parallel(const double* v, const double* flux, const double* src, long n,
                           double dt, double du, double* out);
}  // namespace detail

}  // namespace exspread

#endif
