#pragma once

/// @file convergence.hpp
/// Empirical and exact checks of elitism, absorption, the one-step hitting
/// bound delta and the geometric convergence bound 1 - (1 - delta)^t.
///
/// The Monte Carlo drivers parallelize over independent runs (or rows) with
/// OpenMP. Every run owns RandomStream::substream(seed, run), so results are
/// identical for any thread count and match the `serial::` reference
/// implementations bit for bit.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgo/kernel.hpp"
#include "sgo/sgoals.hpp"

namespace sgo {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double half_width() const noexcept { return 0.5 * (hi - lo); }
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for `successes` out of `trials`.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = kZ95);

struct SuccessCurve {
  double eps = 0.0;
  std::size_t horizon = 0;
  std::size_t runs = 0;
  std::vector<std::size_t> successes;  // index t = 0..horizon
  std::vector<Interval> ci;

  double rate(std::size_t t) const { return static_cast<double>(successes[t]) / static_cast<double>(runs); }
};

/// Per-run chain observations: d(P_t) and best-so-far f for t = 0..T.
struct RunTrace {
  std::vector<double> gaps;
  std::vector<double> best_so_far;
};

/// Runs `runs` independent chains (run r uses substream(seed, r)) and counts
/// d(P_t) < eps per t.
SuccessCurve estimate_success_curve(const Kernel& k, const StateSampler& initial, const OptimizationProblem& prob,
                                    double eps, std::size_t horizon, std::size_t runs, std::uint64_t seed);
SuccessCurve estimate_success_curve(const SGoalConfig& config, const OptimizationProblem& prob, double eps,
                                    std::size_t horizon, std::size_t runs, std::uint64_t seed);

/// Same streams as estimate_success_curve; keeps every run's trace.
std::vector<RunTrace> collect_run_traces(const Kernel& k, const StateSampler& initial, const OptimizationProblem& prob,
                                         std::size_t horizon, std::size_t runs, std::uint64_t seed);

SuccessCurve success_curve_from_traces(const std::vector<RunTrace>& traces, double eps);

enum class DeltaMethod { exact_enumeration, monte_carlo_min };
std::string_view to_string(DeltaMethod m) noexcept;

struct DeltaEstimate {
  double eps = 0.0;
  double delta = 0.0;
  DeltaMethod method = DeltaMethod::exact_enumeration;
  /// Only exact enumeration certifies the premise of the geometric bound.
  bool certifying = true;
  std::optional<Population> argmin_state;
  /// K(x, Omega_eps) for each non-optimal state examined.
  std::vector<std::pair<Population, double>> per_state;
};

struct MonteCarloBudget {
  std::size_t states = 200;
  std::size_t samples_per_state = 2000;
  std::uint64_t seed = 0;
};

/// K(x, Omega_eps) = sum of exact row mass on strict eps-optimal successors.
double mass_into_eps_set(const Kernel& k, const Population& x, const OptimizationProblem& prob, double eps);

DeltaEstimate estimate_delta_exact(const Kernel& k, const OptimizationProblem& prob, double eps,
                                   std::size_t state_cap = kDefaultStateCap);
/// Minimum over sampled non-optimal states of the Wilson lower bound of the
/// hit rate. Non-certifying.
DeltaEstimate estimate_delta_monte_carlo(const Kernel& k, const StateSampler& states, const OptimizationProblem& prob,
                                         double eps, const MonteCarloBudget& budget);

/// 1 - (1 - delta)^t by repeated multiplication.
double geometric_bound(double delta, std::size_t t);

enum class BoundVerdict { satisfied, violated, premise_violated };
std::string_view to_string(BoundVerdict v) noexcept;

struct GeometricBoundCheck {
  std::vector<double> bound;  // t = 0..horizon
  std::vector<BoundVerdict> verdicts;
  bool absorption = false;
  std::string premise_note;
  bool all_satisfied() const;
};

/// verdict(t) is satisfied iff the upper Wilson limit reaches 1 - (1-delta)^t.
/// When delta = 0 or absorption fails every verdict is premise_violated.
GeometricBoundCheck check_geometric_bound(const SuccessCurve& curve, const DeltaEstimate& delta, bool absorption);

/// Matrix-power success probabilities Pr{P_t in Omega_eps}, t = 0..horizon,
/// from the given initial distribution over enumerated states.
std::vector<double> exact_success_probabilities(const TransitionMatrix& m, const std::vector<double>& initial,
                                                const OptimizationProblem& prob, double eps, std::size_t horizon);
std::vector<double> uniform_distribution(std::size_t states);

/// K^(t)(x, Omega_eps) minimized over all start states x, t = 0..horizon.
std::vector<double> exact_worst_case_success(const TransitionMatrix& m, const OptimizationProblem& prob, double eps,
                                             std::size_t horizon);

struct AbsorptionResult {
  bool absorbing = true;
  std::size_t states_checked = 0;
  std::optional<Population> counterexample;
};

AbsorptionResult check_absorption_exact(const Kernel& k, const OptimizationProblem& prob, double eps,
                                        std::size_t state_cap = kDefaultStateCap);
AbsorptionResult check_absorption_sampled(const Kernel& k, const StateSampler& states, const OptimizationProblem& prob,
                                          double eps, std::size_t samples, std::uint64_t seed);

struct ElitismViolation {
  std::size_t sample = 0;
  Population input;
  Population output;
  double input_value = 0.0;
  double output_value = 0.0;
};

struct ElitismResult {
  bool elitist = true;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::vector<ElitismViolation> counterexamples;  // first few, by sample index
};

inline constexpr std::size_t kMaxCounterexamples = 5;

/// Samples x from `states`, y = K(x); elitist iff f(Best(y)) <= f(Best(x)) always.
ElitismResult check_elitist(const Kernel& k, const StateSampler& states, const OptimizationProblem& prob,
                            std::size_t samples, std::uint64_t seed);

struct BoundedFromZeroResult {
  std::vector<DeltaEstimate> per_eps;
  bool bounded = false;
};

BoundedFromZeroResult check_bounded_from_zero_exact(const Kernel& k, const OptimizationProblem& prob,
                                                    const std::vector<double>& eps_list,
                                                    std::size_t state_cap = kDefaultStateCap);
BoundedFromZeroResult check_bounded_from_zero_monte_carlo(const Kernel& k, const StateSampler& states,
                                                          const OptimizationProblem& prob,
                                                          const std::vector<double>& eps_list,
                                                          const MonteCarloBudget& budget);

struct RowFit {
  Population state;
  double total_variation = 0.0;
  double chi_square = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;
};

/// Samples every enumerated row (row r uses substream(seed, r)) and compares
/// the empirical frequencies with the exact row.
std::vector<RowFit> kernel_goodness_of_fit(const Kernel& k, const SearchSpace& space, std::size_t samples_per_row,
                                           std::uint64_t seed, std::size_t state_cap = kDefaultStateCap);

RowFit compare_counts(const Population& state, const Distribution& exact, const std::map<Population, std::size_t>& counts,
                      std::size_t samples);

/// Upper-tail probability of the chi-square distribution.
double chi_square_survival(double statistic, std::size_t dof);

struct CompleteConvergenceDiagnostic {
  /// S(t) = sum_{i=1..t} (1 - success_i / runs); S(0) = 0.
  std::vector<double> partial_sums;
  /// Same sums taken at the lower Wilson limit of each failure rate.
  std::vector<double> partial_sums_lower;
  /// (1 - delta) / delta; infinite when delta = 0.
  double reference = 0.0;
  /// partial_sums_lower(t) <= reference for every t.
  bool dominated = false;
};

CompleteConvergenceDiagnostic complete_convergence_diagnostic(const SuccessCurve& curve, double delta);

struct ConvergenceReport {
  std::string algorithm;
  std::string problem;
  SuccessCurve curve;
  DeltaEstimate delta;
  GeometricBoundCheck bound_check;
  CompleteConvergenceDiagnostic diagnostic;
};

namespace serial {
SuccessCurve estimate_success_curve(const Kernel& k, const StateSampler& initial, const OptimizationProblem& prob,
                                    double eps, std::size_t horizon, std::size_t runs, std::uint64_t seed);
ElitismResult check_elitist(const Kernel& k, const StateSampler& states, const OptimizationProblem& prob,
                            std::size_t samples, std::uint64_t seed);
std::vector<RowFit> kernel_goodness_of_fit(const Kernel& k, const SearchSpace& space, std::size_t samples_per_row,
                                           std::uint64_t seed, std::size_t state_cap = kDefaultStateCap);
}  // namespace serial

}  // namespace sgo
