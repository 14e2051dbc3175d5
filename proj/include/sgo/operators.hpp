#pragma once

/// @file operators.hpp
/// Variation operators (mutation, crossover, hill-climbing steps) as kernels.

#include <cstddef>
#include <optional>
#include <string>

#include "sgo/kernel.hpp"

namespace sgo {

/// Parameters shared by the variation operators and algorithm builders.
struct OperatorParams {
  /// Per-bit flip probability; defaults to 1/l when unset.
  std::optional<double> flip_prob;
  /// HC variate flips exactly one uniformly chosen bit instead of per-bit flips.
  bool single_flip = false;
  /// Standard deviation of the additive Gaussian step on real boxes.
  double sigma = 0.1;
  double crossover_rate = 0.7;
  double difference_weight = 0.5;
  /// Accept a move of equal objective value (HC/PHC).
  bool neutral = false;
  /// Classical keep-if-not-worse survivor step for DE (extension, off by default).
  bool de_greedy = false;
};

struct VariationOperator {
  std::string name;
  Kernel kernel;
};

/// Independent per-bit flips with probability p (1 -> 1). Exact rows for l <= 20.
Kernel bit_flip_kernel(std::size_t length, double p);
/// Flip exactly one uniformly chosen bit: uniform mixture of the l flip maps.
Kernel single_bit_flip_kernel(std::size_t length);
/// Additive N(0, sigma) per coordinate, clamped to the box (1 -> 1, no exact rows).
Kernel gaussian_step_kernel(const SearchSpace& space, double sigma);
/// Single-point crossover with a uniform cut in 1..l-1 (identity when l = 1).
Kernel single_point_crossover_kernel(std::size_t length);
/// Uniform crossover: each coordinate swapped between the parents with probability 1/2.
Kernel uniform_crossover_kernel(std::size_t dimension);
/// Applies a 1 -> 1 kernel independently to both members of a pair (2 -> 2).
Kernel pairwise(const Kernel& single);

VariationOperator make_variate(const SearchSpace& space, const OperatorParams& params);
VariationOperator make_mutation(const SearchSpace& space, const OperatorParams& params);
VariationOperator make_crossover(const SearchSpace& space);

double effective_flip_prob(const SearchSpace& space, const OperatorParams& params);

}  // namespace sgo
