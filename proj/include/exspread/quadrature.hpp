#ifndef EXSPREAD_QUADRATURE_HPP
#define EXSPREAD_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <stdexcept>

namespace exspread {

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
    return left + right + err / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a,b] with absolute tolerance tol.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol, int max_depth = 48) {
  if (!(a <= b)) throw std::invalid_argument("adaptive_simpson: a > b");
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Cumulative trapezoid of f on a uniform grid over [0, T]; result[i] = integral up to t_i.
template <typename F>
std::vector<double> cumulative_trapezoid(const F& f, double T, int points) {
  if (points < 2) throw std::invalid_argument("cumulative_trapezoid: need >= 2 points");
  std::vector<double> out(static_cast<std::size_t>(points));
  const double dt = T / static_cast<double>(points - 1);
  out[0] = 0.0;
  double prev = f(0.0);
  for (int i = 1; i < points; ++i) {
    const double cur = f(dt * static_cast<double>(i));
    out[static_cast<std::size_t>(i)] =
        out[static_cast<std::size_t>(i - 1)] + 0.5 * dt * (prev + cur);
    prev = cur;
  }
  return out;
}

}  // namespace exspread

#endif
