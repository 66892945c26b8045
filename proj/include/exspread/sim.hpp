#ifndef EXSPREAD_SIM_HPP
#define EXSPREAD_SIM_HPP

#include <cstdint>
#include <vector>

#include "exspread/exclusion_config.hpp"
#include "exspread/jump_kernel.hpp"
#include "exspread/rate_field.hpp"
#include "exspread/spread_config.hpp"

namespace exspread {

struct WindowSpec {
  double observe = 2.0;  // half-width of the macroscopic observation region
  double margin = 0.0;   // extra half-width; <= 0 requests the automatic rule
};

struct SimParams {
  int N = 8;
  double T = 1.0;
  JumpKernel kernel = JumpKernel::nearest_neighbor();
  // site rate field: b(s, x/N) for the right-shift process, h(s, x/N) for the
  // centered-spreading process
  RateField rate = RateField::zero();
  WindowSpec window;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
  std::vector<double> snapshot_times;  // sorted, within [0, T]
  bool event_log = false;
};

enum class EventKind : std::uint8_t {
  Exchange = 0,      // a, b: window cell indices, occupancies differed
  Shift = 1,         // a: window cell index of the shift origin
  Spread = 2,        // a: cell index of the spread site before insertion
  ExteriorLeft = 3,  // translation originating left of the window
  ExteriorRight = 4  // (spreading process only) right of the window
};

struct Event {
  double time;
  EventKind kind;
  std::int32_t a;
  std::int32_t b;
};

struct EventTotals {
  std::uint64_t exchange_effective = 0;
  std::uint64_t exchange_noop = 0;
  std::uint64_t field_events = 0;  // accepted shifts / spreads inside the window
  std::uint64_t thinning_rejected = 0;
  std::uint64_t exterior_left = 0;
  std::uint64_t exterior_right = 0;
  std::uint64_t total_exchange() const { return exchange_effective + exchange_noop; }
};

template <class Config>
struct Trajectory {
  int N = 0;
  double T = 0.0;
  Config initial;
  std::vector<double> snapshot_times;
  std::vector<Config> snapshots;
  // per-site counts of the per-site Poisson field (right-shift process only):
  // one vector per snapshot time, indexed by window cell
  std::vector<std::vector<long>> shift_counts_at;
  std::vector<EventTotals> totals_at;  // running totals at each snapshot time
  EventTotals totals;
  std::vector<Event> events;  // populated when event_log was requested

  const std::vector<long>& shift_counts_final() const { return shift_counts_at.back(); }
};

using EprsTrajectory = Trajectory<ExclusionConfig>;
using EpcsTrajectory = Trajectory<SpreadConfig>;

// Automatic margin: diffusive excursions plus the accumulated drift and shift
// budget, enlarged until translations from outside the window are negligible
// (envelope-expected exterior count below 0.05).
double auto_margin(const SimParams& params);

// Number of lattice sites on each side of the origin for the given window.
long window_half_sites(const SimParams& params);

ExclusionConfig make_eprs_window(const SimParams& params);
SpreadConfig make_epcs_window(const SimParams& params);

// Exact event-driven simulation of the right-shift process: exchange clocks of
// rate N^2 p(z) per unordered in-window pair, thinned per-site shift clocks of
// rate b(s, x/N), plus an aggregate clock for shifts originating left of the
// window. Aborts if the exterior budget exceeds 0.1 expected events.
EprsTrajectory simulate_eprs(const SimParams& params, const ExclusionConfig& init);

// Same engine on the active sublattice of the centered-spreading process, with
// tau-tilde insertions at rate h(s, x/N) and both exterior sides handled.
// Requires the initial state (1, eta) with eta on the integer sublattice.
EpcsTrajectory simulate_epcs(const SimParams& params, const SpreadConfig& init);

}  // namespace exspread

#endif
