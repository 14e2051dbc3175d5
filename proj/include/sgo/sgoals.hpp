#pragma once

/// @file sgoals.hpp
/// HC, PHC, GGA, SSGA and DE assembled from kernel combinators, plus the
/// generic iterate-until-budget driver.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgo/kernel.hpp"
#include "sgo/operators.hpp"

namespace sgo {

enum class Algorithm { hc, phc, gga, ssga, de };

std::string_view to_string(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view id) noexcept;
const std::vector<Algorithm>& all_algorithms();

/// Which block the replacement sees first.
enum class VrOrder { population_first, variation_first };

/// R o [1 (x) V] (population first) or R o [V (x) 1] (variation first).
Kernel vr_kernel(const Kernel& variation, const Kernel& replacement, VrOrder order);

/// r_HC = pi_1 o sort-two: keeps the first argument only if strictly better.
Kernel hc_replacement_kernel(const OptimizationProblem& prob);

/// Neutral moves are accepted when `neutral` is set (population-first order).
Kernel hc_kernel(const Kernel& variate, bool neutral, const OptimizationProblem& prob);
Kernel phc_kernel(const Kernel& variate, bool neutral, std::size_t n, const OptimizationProblem& prob);

/// Uniform ordered pair of distinct parents: uniform mixture of pi_a (x) pi_b, a != b.
Kernel parent_pick_kernel(std::size_t n);

/// `mutate` is a 1 -> 1 kernel applied to each child.
Kernel gga_kernel(const Kernel& xover, const Kernel& mutate, double crossover_rate, std::size_t n);
Kernel ssga_kernel(const Kernel& xover, const Kernel& mutate, double crossover_rate, std::size_t n,
                   const OptimizationProblem& prob);

/// Three distinct indices, all different from `target` (0-based), by rejection.
std::array<std::size_t, 3> pick_distinct_parents(std::size_t n, std::size_t target, RandomStream& rng);

/// q_k = a_k + F (b_k - c_k) where `cross[k]`, else target_k. No clamping.
Individual de_trial(const Individual& target, const Individual& a, const Individual& b, const Individual& c,
                    double difference_weight, const std::vector<bool>& cross);

/// Join of the n trial generators. With `greedy` each slot keeps the trial
/// only when it is not worse than the current member (classical DE).
Kernel de_kernel(double difference_weight, double crossover_rate, std::size_t n, const OptimizationProblem& prob,
                 bool greedy = false);

struct SGoalConfig {
  Algorithm algorithm = Algorithm::hc;
  std::size_t population_size = 1;
  std::size_t iterations = 0;
  OperatorParams params;
  std::uint64_t seed = 0;
};

/// Throws invalid_config when the configuration cannot drive the algorithm.
void validate(const SGoalConfig& config, const OptimizationProblem& prob);

Kernel make_algorithm_kernel(const SGoalConfig& config, const OptimizationProblem& prob);

/// Uniform initial population over the space.
StateSampler uniform_initializer(const SearchSpace& space, std::size_t n);

struct RunResult {
  Individual best;            // Best(P_T)
  double best_f = 0.0;        // f(Best(P_T))
  double best_so_far_f = 0.0; // min over t of f(Best(P_t))
  MarkovChainTrace trace;
  std::vector<double> best_so_far;
  double seconds = 0.0;
};

/// Runs the chain for `config.iterations` steps from a uniform start. The
/// stream is RandomStream::substream(config.seed, run_index).
RunResult run_sgoal(const SGoalConfig& config, const OptimizationProblem& prob, std::uint64_t run_index = 0);

}  // namespace sgo
