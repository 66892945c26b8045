#ifndef EXSPREAD_JUMP_KERNEL_HPP
#define EXSPREAD_JUMP_KERNEL_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace exspread {

// Finite-range symmetric jump distribution p(.) on the integers.
// Entries are stored for positive displacements; p(-z) = p(z) is implied,
// and sum_{z != 0} p(z) = 1 is enforced to 1e-12.
class JumpKernel {
 public:
  explicit JumpKernel(const std::vector<std::pair<int, double>>& positive_entries) {
    int range = 0;
    for (const auto& [z, p] : positive_entries) {
      if (z < 1) throw std::invalid_argument("JumpKernel: displacements must be >= 1");
      if (p < 0.0) throw std::invalid_argument("JumpKernel: negative probability");
      range = std::max(range, z);
    }
    if (range == 0) throw std::invalid_argument("JumpKernel: empty kernel");
    probs_.assign(static_cast<std::size_t>(range) + 1, 0.0);
    for (const auto& [z, p] : positive_entries) {
      if (probs_[static_cast<std::size_t>(z)] != 0.0)
        throw std::invalid_argument("JumpKernel: duplicate displacement");
      probs_[static_cast<std::size_t>(z)] = p;
    }
    double total = 0.0;
    for (double p : probs_) total += 2.0 * p;
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("JumpKernel: probabilities must sum to 1 over +-z");
  }

  static JumpKernel nearest_neighbor() { return JumpKernel({{1, 0.5}}); }

  int range() const { return static_cast<int>(probs_.size()) - 1; }

  // p(z) for any integer displacement; zero beyond the range.
  double prob(int z) const {
    const int a = z < 0 ? -z : z;
    if (a == 0 || a > range()) return 0.0;
    return probs_[static_cast<std::size_t>(a)];
  }

  // sigma^2 = (1/2) sum_z z^2 p(z) over both signs.
  double sigma_sq() const {
    double s = 0.0;
    for (int z = 1; z <= range(); ++z)
      s += static_cast<double>(z) * static_cast<double>(z) * probs_[static_cast<std::size_t>(z)];
    return s;  // half of the two-sided sum cancels the factor 2
  }

 private:
  std::vector<double> probs_;  // index z = 1..range
};

inline double sigma_sq(const JumpKernel& kernel) { return kernel.sigma_sq(); }

}  // namespace exspread

#endif
