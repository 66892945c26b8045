#ifndef EXSPREAD_EXCLUSION_CONFIG_HPP
#define EXSPREAD_EXCLUSION_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace exspread {

// Occupancies of the right-shift process on a finite window of integer sites
// [window_left, window_left + len). Cells discarded past the right edge are
// counted in out_right (all cells) and out_right_ones (particles only).
class ExclusionConfig {
 public:
  ExclusionConfig(long window_left, std::vector<std::uint8_t> cells);

  long window_left() const { return window_left_; }
  long window_right() const { return window_left_ + static_cast<long>(cells_.size()) - 1; }
  long size() const { return static_cast<long>(cells_.size()); }
  bool in_window(long site) const { return site >= window_left() && site <= window_right(); }

  int at(long site) const;
  int at_index(long i) const { return cells_[static_cast<std::size_t>(i)]; }
  const std::vector<std::uint8_t>& cells() const { return cells_; }

  // Swap the occupancies at sites x and y; a no-op when they match.
  void exchange(long x, long y);
  void exchange_index(long i, long j);

  // Right translation tau_z: cell z becomes 0, everything right of z moves one
  // site right, the rightmost cell is discarded.
  void tau_shift(long z);

  // Whole-window right shift with the leftmost cell duplicated as fill. Stands
  // in for a translation originating left of the window.
  void shift_fill_left();

  long particle_count() const { return ones_; }
  long out_right() const { return out_right_; }
  long out_right_ones() const { return out_right_ones_; }

  bool operator==(const ExclusionConfig& o) const {
    return window_left_ == o.window_left_ && cells_ == o.cells_;
  }

  // Compact run-length text form, e.g. "E -4 3x1 2x0 4x1" (window_left, runs).
  std::string to_rle() const;
  static ExclusionConfig from_rle(const std::string& text);

 private:
  long index_of(long site) const;
  void drop_rightmost_after_shift(std::uint8_t dropped);

  long window_left_ = 0;
  std::vector<std::uint8_t> cells_;
  long ones_ = 0;
  long out_right_ = 0;
  long out_right_ones_ = 0;
};

long particle_count(const ExclusionConfig& c);

}  // namespace exspread

#endif
