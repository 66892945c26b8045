#ifndef EXSPREAD_EMPIRICAL_HPP
#define EXSPREAD_EMPIRICAL_HPP

#include <functional>
#include <string>
#include <vector>

#include "exspread/rng.hpp"
#include "exspread/sim.hpp"
#include "exspread/stats.hpp"
#include "exspread/test_function.hpp"

namespace exspread {

using Profile = std::function<double(double)>;

// Independent cells, cell x occupied with probability rho0(x/N).
ExclusionConfig sample_bernoulli_profile(const Profile& rho0, const SimParams& params, Rng& rng);
SpreadConfig sample_bernoulli_profile_epcs(const Profile& rho0, const SimParams& params,
                                           Rng& rng);

// <pi^N, G> = (1/N) sum_z G(z/N) xi(z). The support of G must sit inside the
// window's macroscopic image. The spreading-process overload sums over the
// half-integer positions of the active sublattice.
double empirical_pair(const ExclusionConfig& config, const TestFunction& g, int N);
double empirical_pair(const SpreadConfig& config, const TestFunction& g, int N);
double empirical_pair(const ExclusionConfig& config, double support_lo, double support_hi,
                      const std::function<double(double)>& g, int N);
double empirical_pair(const SpreadConfig& config, double support_lo, double support_hi,
                      const std::function<double(double)>& g, int N);

// (1/N) sum_x W_t^{x,N} at a stored snapshot time, exterior shifts included.
double wlln_statistic(const EprsTrajectory& record, double t);

// Companion target: int_0^t C(s) ds.
double wlln_target(const RateField& rate, double t);

// Sample mean/variance cells per (snapshot time, test function), mergeable
// across replica batches. The tag guards against mixing mismatched experiments.
class EnsembleStats {
 public:
  EnsembleStats() = default;
  EnsembleStats(std::string tag, std::vector<double> times, std::vector<std::string> fn_ids);

  void add_replica(const std::vector<std::vector<double>>& values);  // [time][fn]
  void merge(const EnsembleStats& other);

  const RunningStat& cell(std::size_t time_index, std::size_t fn_index) const;
  const std::vector<double>& times() const { return times_; }
  const std::vector<std::string>& fn_ids() const { return fn_ids_; }
  const std::string& tag() const { return tag_; }
  long long replicas() const { return replicas_; }

 private:
  std::string tag_;
  std::vector<double> times_;
  std::vector<std::string> fn_ids_;
  std::vector<RunningStat> cells_;
  long long replicas_ = 0;
};

}  // namespace exspread

#endif
