#ifndef EXSPREAD_SPREAD_CONFIG_HPP
#define EXSPREAD_SPREAD_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace exspread {

enum class SpreadParity { Gamma1, Gamma2 };  // occupied sublattice: integers / half-integers

// State of the centered-spreading process: the occupied sublattice alternates
// between Z and Z+1/2 as mass enters. Cells hold the active sublattice only;
// positions are tracked in half-units (an integer count of half steps), with
// anchor_half the position of cells[0]. Consecutive cells sit one full unit
// apart; the intermediate sublattice is vacant by construction.
class SpreadConfig {
 public:
  SpreadConfig(long anchor_half, std::vector<std::uint8_t> cells, long mass_n = 1);

  long size() const { return static_cast<long>(cells_.size()); }
  long anchor_half() const { return anchor_half_; }
  long mass_n() const { return mass_n_; }
  SpreadParity parity() const {
    return (mass_n_ % 2 != 0) ? SpreadParity::Gamma1 : SpreadParity::Gamma2;
  }

  // physical position of cell i, in half-units
  long position_half(long i) const { return anchor_half_ + 2 * i; }
  long first_position_half() const { return anchor_half_; }
  long last_position_half() const { return position_half(size() - 1); }
  bool on_active_lattice(long pos_half) const {
    return ((pos_half - anchor_half_) % 2) == 0;
  }
  bool in_window(long pos_half) const {
    return pos_half >= first_position_half() && pos_half <= last_position_half();
  }

  int at_index(long i) const { return cells_[static_cast<std::size_t>(i)]; }
  int at_half(long pos_half) const;  // 0 on the inactive sublattice
  const std::vector<std::uint8_t>& cells() const { return cells_; }

  void exchange_index(long i, long j);

  // Spread at active position x (half-units): a particle enters at x - 1/2,
  // contents right of x move +1/2, contents left of x - 1/2 move -1/2, the
  // mass counter increments and the parity flips. The rightmost cell is
  // discarded to keep the window length fixed.
  void tau_tilde_spread(long x_half);

  // Translations entering from outside the window: contents move +1/2 (spread
  // left of the window) or -1/2 (right of it); mass and parity still advance.
  void exterior_spread_left();
  void exterior_spread_right();

  long particle_count() const { return ones_; }
  long out_right() const { return out_right_; }
  long out_right_ones() const { return out_right_ones_; }

  bool operator==(const SpreadConfig& o) const {
    return anchor_half_ == o.anchor_half_ && mass_n_ == o.mass_n_ && cells_ == o.cells_;
  }

  // position (half-units) -> occupancy, active sublattice only
  std::map<long, int> to_position_map() const;
  static SpreadConfig from_position_map(const std::map<long, int>& m, long mass_n);

  // Compact run-length text form, e.g. "S -8 1 2x1 3x0" (anchor_half, mass_n, runs).
  std::string to_rle() const;
  static SpreadConfig from_rle(const std::string& text);

 private:
  long anchor_half_ = 0;
  std::vector<std::uint8_t> cells_;
  long mass_n_ = 1;
  long ones_ = 0;
  long out_right_ = 0;
  long out_right_ones_ = 0;
};

long particle_count(const SpreadConfig& c);

}  // namespace exspread

#endif
