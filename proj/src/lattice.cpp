#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "exspread/exclusion_config.hpp"
#include "exspread/spread_config.hpp"

namespace exspread {

namespace {

void append_rle(std::ostringstream& os, const std::vector<std::uint8_t>& cells) {
  std::size_t i = 0;
  while (i < cells.size()) {
    std::size_t j = i;
    while (j < cells.size() && cells[j] == cells[i]) ++j;
    os << ' ' << (j - i) << 'x' << static_cast<int>(cells[i]);
    i = j;
  }
}

std::vector<std::uint8_t> parse_rle_runs(std::istringstream& is) {
  std::vector<std::uint8_t> cells;
  std::string tok;
  while (is >> tok) {
    const auto x = tok.find('x');
    if (x == std::string::npos) throw std::invalid_argument("rle: bad run token '" + tok + "'");
    const long count = std::stol(tok.substr(0, x));
    const int val = std::stoi(tok.substr(x + 1));
    if (count <= 0 || (val != 0 && val != 1))
      throw std::invalid_argument("rle: bad run token '" + tok + "'");
    cells.insert(cells.end(), static_cast<std::size_t>(count), static_cast<std::uint8_t>(val));
  }
  return cells;
}

long count_ones(const std::vector<std::uint8_t>& cells) {
  long n = 0;
  for (auto c : cells) n += c;
  return n;
}

void validate_cells(const std::vector<std::uint8_t>& cells) {
  if (cells.empty()) throw std::invalid_argument("configuration: empty window");
  for (auto c : cells)
    if (c != 0 && c != 1) throw std::invalid_argument("configuration: cells must be 0/1");
}

}  // namespace

ExclusionConfig::ExclusionConfig(long window_left, std::vector<std::uint8_t> cells)
    : window_left_(window_left), cells_(std::move(cells)) {
  validate_cells(cells_);
  ones_ = count_ones(cells_);
}

long ExclusionConfig::index_of(long site) const {
  if (!in_window(site)) throw std::out_of_range("ExclusionConfig: site outside window");
  return site - window_left_;
}

int ExclusionConfig::at(long site) const {
  return cells_[static_cast<std::size_t>(index_of(site))];
}

void ExclusionConfig::exchange(long x, long y) { exchange_index(index_of(x), index_of(y)); }

void ExclusionConfig::exchange_index(long i, long j) {
  std::swap(cells_[static_cast<std::size_t>(i)], cells_[static_cast<std::size_t>(j)]);
}

void ExclusionConfig::drop_rightmost_after_shift(std::uint8_t dropped) {
  ++out_right_;
  if (dropped) {
    ++out_right_ones_;
    --ones_;
  }
}

void ExclusionConfig::tau_shift(long z) {
  const long i = index_of(z);
  const std::uint8_t dropped = cells_.back();
  // cells right of z take the value of their left neighbor; z itself becomes 0
  for (long k = static_cast<long>(cells_.size()) - 1; k > i; --k)
    cells_[static_cast<std::size_t>(k)] = cells_[static_cast<std::size_t>(k - 1)];
  cells_[static_cast<std::size_t>(i)] = 0;
  drop_rightmost_after_shift(dropped);
}

void ExclusionConfig::shift_fill_left() {
  const std::uint8_t dropped = cells_.back();
  for (long k = static_cast<long>(cells_.size()) - 1; k > 0; --k)
    cells_[static_cast<std::size_t>(k)] = cells_[static_cast<std::size_t>(k - 1)];
  if (cells_[0]) ++ones_;  // leftmost duplicated
  drop_rightmost_after_shift(dropped);
}

std::string ExclusionConfig::to_rle() const {
  std::ostringstream os;
  os << "E " << window_left_;
  append_rle(os, cells_);
  return os.str();
}

ExclusionConfig ExclusionConfig::from_rle(const std::string& text) {
  std::istringstream is(text);
  std::string tag;
  long left = 0;
  if (!(is >> tag >> left) || tag != "E")
    throw std::invalid_argument("rle: expected 'E <window_left> <runs>'");
  return ExclusionConfig(left, parse_rle_runs(is));
}

long particle_count(const ExclusionConfig& c) { return c.particle_count(); }

SpreadConfig::SpreadConfig(long anchor_half, std::vector<std::uint8_t> cells, long mass_n)
    : anchor_half_(anchor_half), cells_(std::move(cells)), mass_n_(mass_n) {
  validate_cells(cells_);
  if (mass_n_ < 1) throw std::invalid_argument("SpreadConfig: mass_n must be >= 1");
  // occupied sublattice is Z for odd mass, Z + 1/2 for even mass
  const long want = (mass_n_ % 2 != 0) ? 0 : 1;
  if (((anchor_half_ % 2) + 2) % 2 != want)
    throw std::invalid_argument("SpreadConfig: anchor parity inconsistent with mass_n");
  ones_ = count_ones(cells_);
}

int SpreadConfig::at_half(long pos_half) const {
  if (!in_window(pos_half)) throw std::out_of_range("SpreadConfig: position outside window");
  if (!on_active_lattice(pos_half)) return 0;
  return cells_[static_cast<std::size_t>((pos_half - anchor_half_) / 2)];
}

void SpreadConfig::exchange_index(long i, long j) {
  std::swap(cells_[static_cast<std::size_t>(i)], cells_[static_cast<std::size_t>(j)]);
}

void SpreadConfig::tau_tilde_spread(long x_half) {
  if (!in_window(x_half)) throw std::out_of_range("SpreadConfig: spread site outside window");
  if (!on_active_lattice(x_half))
    throw std::invalid_argument("SpreadConfig: spread site off the active sublattice");
  const long i = (x_half - anchor_half_) / 2;
  const std::uint8_t dropped = cells_.back();
  // new particle lands immediately left of x; the old cell at x ends up at x + 1/2
  cells_.insert(cells_.begin() + i, std::uint8_t{1});
  ++ones_;
  cells_.pop_back();
  ++out_right_;
  if (dropped) {
    ++out_right_ones_;
    --ones_;
  }
  anchor_half_ -= 1;
  ++mass_n_;
}

void SpreadConfig::exterior_spread_left() {
  // everything in the window is right of the spread site: contents move +1/2
  anchor_half_ += 1;
  ++mass_n_;
}

void SpreadConfig::exterior_spread_right() {
  anchor_half_ -= 1;
  ++mass_n_;
}

std::map<long, int> SpreadConfig::to_position_map() const {
  std::map<long, int> m;
  for (long i = 0; i < size(); ++i) m[position_half(i)] = at_index(i);
  return m;
}

SpreadConfig SpreadConfig::from_position_map(const std::map<long, int>& m, long mass_n) {
  if (m.empty()) throw std::invalid_argument("SpreadConfig: empty position map");
  const long anchor = m.begin()->first;
  std::vector<std::uint8_t> cells;
  cells.reserve(m.size());
  long expected = anchor;
  for (const auto& [pos, val] : m) {
    if (pos != expected)
      throw std::invalid_argument("SpreadConfig: positions must be consecutive unit-spaced");
    cells.push_back(static_cast<std::uint8_t>(val));
    expected += 2;
  }
  return SpreadConfig(anchor, std::move(cells), mass_n);
}

std::string SpreadConfig::to_rle() const {
  std::ostringstream os;
  os << "S " << anchor_half_ << ' ' << mass_n_;
  append_rle(os, cells_);
  return os.str();
}

SpreadConfig SpreadConfig::from_rle(const std::string& text) {
  std::istringstream is(text);
  std::string tag;
  long anchor = 0, mass = 0;
  if (!(is >> tag >> anchor >> mass) || tag != "S")
    throw std::invalid_argument("rle: expected 'S <anchor_half> <mass_n> <runs>'");
  return SpreadConfig(anchor, parse_rle_runs(is), mass);
}

long particle_count(const SpreadConfig& c) { return c.particle_count(); }

}  // namespace exspread
