#ifndef EXSPREAD_TEST_FUNCTION_HPP
#define EXSPREAD_TEST_FUNCTION_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "exspread/rate_field.hpp"

namespace exspread {

// Compactly supported bump G on [c-w, c+w], optionally modulated in time:
// H(t,u) = m(t) G(u). Families: raised cosine (1+cos(pi s))/2 and the quartic
// spline (1-s^2)^2, s = (u-c)/w. Derivatives up to order 2 are analytic.
class TestFunction {
 public:
  enum class Family { RaisedCosine, Quartic };

  TestFunction(Family family, double center, double width, TimeModulation mod = {})
      : family_(family), c_(center), w_(width), mod_(mod) {
    if (width <= 0.0) throw std::invalid_argument("test_function.width: must be > 0");
  }

  static TestFunction raised_cosine(double center, double width) {
    return TestFunction(Family::RaisedCosine, center, width);
  }
  static TestFunction quartic(double center, double width) {
    return TestFunction(Family::Quartic, center, width);
  }

  double operator()(double u) const {
    const double s = (u - c_) / w_;
    if (s <= -1.0 || s >= 1.0) return 0.0;
    if (family_ == Family::RaisedCosine) return 0.5 * (1.0 + std::cos(std::numbers::pi * s));
    const double q = 1.0 - s * s;
    return q * q;
  }

  double d1(double u) const {
    const double s = (u - c_) / w_;
    if (s <= -1.0 || s >= 1.0) return 0.0;
    if (family_ == Family::RaisedCosine)
      return -0.5 * std::numbers::pi / w_ * std::sin(std::numbers::pi * s);
    return -4.0 * s * (1.0 - s * s) / w_;
  }

  double d2(double u) const {
    const double s = (u - c_) / w_;
    if (s <= -1.0 || s >= 1.0) return 0.0;
    if (family_ == Family::RaisedCosine) {
      const double k = std::numbers::pi / w_;
      return -0.5 * k * k * std::cos(std::numbers::pi * s);
    }
    return (12.0 * s * s - 4.0) / (w_ * w_);
  }

  double value(double t, double u) const { return mod_(t) * (*this)(u); }
  double time_derivative(double t, double u) const { return mod_.derivative(t) * (*this)(u); }

  double support_lo() const { return c_ - w_; }
  double support_hi() const { return c_ + w_; }
  double center() const { return c_; }
  double width() const { return w_; }
  Family family() const { return family_; }
  const TimeModulation& modulation() const { return mod_; }
  bool time_constant() const { return mod_.is_constant(); }

  std::string id() const {
    const char* fam = family_ == Family::RaisedCosine ? "rc" : "q4";
    return std::string(fam) + "_c" + trim(c_) + "_w" + trim(w_);
  }

 private:
  static std::string trim(double x) {
    std::string s = std::to_string(x);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

  Family family_;
  double c_;
  double w_;
  TimeModulation mod_;
};

}  // namespace exspread

#endif
