#pragma once

/// @file structural.hpp
/// Structural kernels: swap, projections, permutations and the sorting
/// network built from sort-two comparators.
///
/// Index arguments are 1-based to match the usual way these operators are
/// written down; populations themselves are 0-based containers.

#include <cstddef>
#include <vector>

#include "sgo/kernel.hpp"

namespace sgo {

/// Strictly increasing 1-based indices into a population of arity n.
class IndexSet {
 public:
  IndexSet(std::vector<std::size_t> indices, std::size_t n);
  /// {first, first+1, ..., last}.
  static IndexSet range(std::size_t first, std::size_t last, std::size_t n);

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  std::size_t arity() const noexcept { return n_; }

 private:
  std::vector<std::size_t> indices_;
  std::size_t n_;
};

/// A bijection [i_1, ..., i_n] of {1..n}; output position k takes input i_k.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> order);

  const std::vector<std::size_t>& order() const noexcept { return order_; }
  std::size_t size() const noexcept { return order_.size(); }
  Permutation inverse() const;

 private:
  std::vector<std::size_t> order_;
};

/// (x, y) -> (y, x).
Kernel swap_kernel();
Kernel projection_kernel(const IndexSet& indices);
/// Join of the single-index projections pi_{i_1}, ..., pi_{i_n}.
Kernel permutation_kernel(const Permutation& perm);

inline constexpr std::size_t kMaxExactPermutationArity = 8;

/// Uniformly random rearrangement of the population (uniform mixture of all
/// n! permutation kernels). Exact rows are available for n <= 8.
Kernel random_scan_permutation(std::size_t n);

/// Keeps (x, y) iff f(x) < f(y); otherwise (ties included) returns (y, x).
Kernel sort_two_kernel(const OptimizationProblem& prob);

/// w_{n,k}: sort-two on positions (k, k+1), everything else untouched.
Kernel bubble_pass_kernel(std::size_t n, std::size_t k, const OptimizationProblem& prob);

/// t_{n,k} = w_{n,k} o ... o w_{n,1}: one left-to-right sweep over positions 1..k+1.
Kernel bubble_sweep_kernel(std::size_t n, std::size_t k, const OptimizationProblem& prob);

/// Bubble sort network of sweeps of decreasing length (t_{n,n-1} first, t_{n,1} last).
/// `sweeps` limits how many sweeps are applied; the default n-1 sorts completely.
Kernel sort_network_kernel(std::size_t n, const OptimizationProblem& prob, std::size_t sweeps);
Kernel full_sort_kernel(std::size_t n, const OptimizationProblem& prob);

/// pi_{1,2} after the first two sweeps over four positions: the two smallest
/// objective values among the four inputs.
Kernel best_two_of_four_kernel(const OptimizationProblem& prob);

}  // namespace sgo
