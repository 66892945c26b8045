#ifndef EXSPREAD_COUPLING_HPP
#define EXSPREAD_COUPLING_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "exspread/sim.hpp"

namespace exspread {

// Role reversal plus recentering of a right-shift configuration by half the
// accumulated translation count: the auxiliary state coupled to the
// centered-spreading process.
SpreadConfig build_auxiliary(const ExclusionConfig& xi, long shift_total);

// One marginal of the coupled system. Occupancies carry the particle class
// (1 first class, 2 second class); first-class cell indices are kept sorted,
// and the label pairing between the two marginals is by rank.
struct CoupledMarginal {
  std::vector<std::int8_t> occ;
  long anchor_half = 0;
  long mass = 1;
  std::vector<long> first_idx;   // sorted
  std::vector<long> second_idx;  // sorted

  long cells() const { return static_cast<long>(occ.size()); }
  long position_half(long idx) const { return anchor_half + 2 * idx; }
  SpreadConfig to_spread_config() const;
  static CoupledMarginal from_config(const SpreadConfig& config);
};

struct CoupledState {
  CoupledMarginal epcs;
  CoupledMarginal aux;
  long j = 0;  // total second-class count across both marginals

  long parity_mismatch() const { return ((epcs.mass - aux.mass) % 2 + 2) % 2; }
  // sup over labels of |X_k - X_hat_k|, in half lattice units
  long max_label_gap_half() const;
  void check_invariants() const;  // throws on label disorder or |n - n_hat| > J
};

struct CoupledEvent {
  enum class Kind {
    PairedJump,   // a = label rank, b = direction (+1/-1)
    SecondJump,   // a = index into second_idx of marginal b (0 epcs, 1 aux), dir in c
    BirthEpcs,    // a = epcs cell index of the spread site (case 1)
    BirthAux,     // a = aux cell index of the spread site (case 2)
    BirthBoth     // a = epcs cell index; the aux site pairs through x' (case 3)
  };
  Kind kind;
  long a = 0;
  long b = 0;
  long c = 0;
};

// Applies one transition per the coupling rules: paired first-class jumps with
// priority over second class, independent second-class jumps, and the three
// birth cases with rank relabeling after simultaneous births.
void coupled_step(CoupledState& state, const CoupledEvent& event);

struct CoupledRecord {
  EpcsTrajectory epcs;
  EpcsTrajectory aux;
  std::vector<std::pair<double, long>> j_path;  // (time, J) at each second-class birth
  std::vector<long> j_at;                       // per snapshot
  std::vector<long> mass_at;
  std::vector<long> mass_hat_at;
  std::vector<long> max_label_gap_half_at;
};

// Exact simulation of the coupled pair (centered-spreading process, auxiliary
// process). params.rate must be the spreading field h; b is its drift-shifted
// companion. Nearest-neighbor kernels only: the rank labeling is order
// preserving only without jumps over particles.
CoupledRecord simulate_coupled(const SimParams& params, const RateField& b,
                               const SpreadConfig& init,
                               bool check_displacement_invariant = false);

}  // namespace exspread

#endif
