#ifndef EXSPREAD_GRID_FUNCTION_HPP
#define EXSPREAD_GRID_FUNCTION_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace exspread {

struct PdeGrid {
  double u_min = -8.0;
  double u_max = 8.0;
  double du = 0.01;

  long cells() const;
  double center(long i) const { return u_min + (static_cast<double>(i) + 0.5) * du; }
};

// Space-time grid of a bounded density profile: one spatial array per stored
// time. Values are validated to lie in [0,1] up to a 1e-6 tolerance and to be
// finite.
class GridFunction {
 public:
  GridFunction(PdeGrid grid, std::vector<double> times,
               std::vector<std::vector<double>> values, std::string tag = {});

  const PdeGrid& grid() const { return grid_; }
  const std::vector<double>& times() const { return times_; }
  long cells() const { return grid_.cells(); }
  const std::vector<double>& at(std::size_t time_index) const { return values_[time_index]; }
  const std::string& tag() const { return tag_; }

  std::size_t time_index(double t) const;  // exact match up to 1e-9, throws otherwise

  // linear interpolation in u at a stored time, constant beyond the edges
  double interpolate(std::size_t time_index, double u) const;

  // integral of g(u) * value(t, u) du by the midpoint rule on the grid
  template <typename G>
  double pair_against(std::size_t time_index, G&& g) const {
    const auto& v = values_[time_index];
    double acc = 0.0;
    for (long i = 0; i < grid_.cells(); ++i)
      acc += g(grid_.center(i)) * v[static_cast<std::size_t>(i)];
    return acc * grid_.du;
  }

  double total_mass(std::size_t time_index) const;

  // CSV: header row of the u-grid, then one row per stored time (time first).
  void write_csv(std::ostream& os) const;

 private:
  PdeGrid grid_;
  std::vector<double> times_;
  std::vector<std::vector<double>> values_;
  std::string tag_;
};

}  // namespace exspread

#endif
