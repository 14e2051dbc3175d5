#include "sgo/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>

#include "sgo/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sgo {

namespace {

std::vector<Population> enumerate_for(const Kernel& k, const OptimizationProblem& prob, std::size_t state_cap) {
  const auto& space = prob.space();
  if (!space.is_bitstring()) {
    throw Error(ErrorCode::enumeration_too_large, "exact mode needs a finite bitstring space");
  }
  const std::size_t bits = space.dimension() * k.input_arity();
  if (bits >= 63 || (std::size_t{1} << bits) > state_cap) {
    throw Error(ErrorCode::enumeration_too_large,
                "2^" + std::to_string(bits) + " states exceed the cap of " + std::to_string(state_cap));
  }
  return enumerate_states(space, k.input_arity(), bits);
}

void check_eps(double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "eps must be > 0");
}

void run_chain_into(const Kernel& k, const StateSampler& initial, const OptimizationProblem& prob,
                    std::size_t horizon, std::uint64_t seed, std::size_t run, RunTrace& out) {
  RandomStream rng = RandomStream::substream(seed, run);
  out.gaps.resize(horizon + 1);
  out.best_so_far.resize(horizon + 1);
  walk_chain(k, initial, horizon, rng, [&](std::size_t t, const Population& p) {
    const double f = best_value(p, prob);
    out.gaps[t] = f - prob.optimum_value().value_or(0.0);
    out.best_so_far[t] = t == 0 ? f : std::min(f, out.best_so_far[t - 1]);
  });
}

void count_run(const Kernel& k, const StateSampler& initial, const OptimizationProblem& prob, double eps,
               std::size_t horizon, std::uint64_t seed, std::size_t run, std::vector<std::size_t>& counts) {
  RandomStream rng = RandomStream::substream(seed, run);
  walk_chain(k, initial, horizon, rng, [&](std::size_t t, const Population& p) {
    if (optimality_gap(p, prob) < eps) ++counts[t];
  });
}

SuccessCurve make_curve(double eps, std::size_t horizon, std::size_t runs, std::vector<std::size_t> counts) {
  SuccessCurve curve;
  curve.eps = eps;
  curve.horizon = horizon;
  curve.runs = runs;
  curve.successes = std::move(counts);
  curve.ci.reserve(horizon + 1);
  for (auto s : curve.successes) curve.ci.push_back(wilson_interval(s, runs));
  return curve;
}

void validate_curve_args(const OptimizationProblem& prob, double eps, std::size_t runs) {
  check_eps(eps);
  if (runs == 0) throw Error(ErrorCode::invalid_argument, "runs must be >= 1");
  if (!prob.optimum_value()) throw Error(ErrorCode::gap_unavailable, "success curves need a known optimum");
}

struct ElitismSample {
  bool violated = false;
  ElitismViolation detail;
};

ElitismSample elitism_sample(const Kernel& k, const StateSampler& states, const OptimizationProblem& prob,
                             std::uint64_t seed, std::size_t i) {
  RandomStream rng = RandomStream::substream(seed, i);
  RandomStream s_state = rng.derive(0);
  RandomStream s_step = rng.derive(1);
  ElitismSample out;
  out.detail.sample = i;
  out.detail.input = states(s_state);
  out.detail.output = k.sample(out.detail.input, s_step);
  out.detail.input_value = best_value(out.detail.input, prob);
  out.detail.output_value = best_value(out.detail.output, prob);
  out.violated = out.detail.output_value > out.detail.input_value;
  return out;
}

RowFit fit_row(const Kernel& k, const Population& state, std::size_t samples, std::uint64_t seed, std::size_t r) {
  RandomStream rng = RandomStream::substream(seed, r);
  std::map<Population, std::size_t> counts;
  for (std::size_t s = 0; s < samples; ++s) {
    RandomStream child = rng.derive(s);
    ++counts[k.sample(state, child)];
  }
  return compare_counts(state, k.exact_row(state), counts, samples);
}

std::vector<Population> gof_states(const Kernel& k, const SearchSpace& space, std::size_t state_cap) {
  if (!k.has_exact()) throw Error(ErrorCode::oracle_unavailable, "kernel '" + k.name() + "' has no exact rows");
  if (!space.is_bitstring()) throw Error(ErrorCode::enumeration_too_large, "goodness of fit needs a finite space");
  const std::size_t bits = space.dimension() * k.input_arity();
  if (bits >= 63 || (std::size_t{1} << bits) > state_cap) {
    throw Error(ErrorCode::enumeration_too_large, "state count exceeds the cap");
  }
  return enumerate_states(space, k.input_arity(), bits);
}

}  // namespace

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (successes > trials) throw Error(ErrorCode::invalid_argument, "more successes than trials");
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The endpoints at 0 and n are exact; centre - half would leave rounding dust.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

SuccessCurve estimate_success_curve(const Kernel& k, const StateSampler& initial, const OptimizationProblem& prob,
                                    double eps, std::size_t horizon, std::size_t runs, std::uint64_t seed) {
  validate_curve_args(prob, eps, runs);
  std::vector<std::size_t> totals(horizon + 1, 0);
  const auto n_runs = static_cast<std::ptrdiff_t>(runs);
#pragma omp parallel
  {
    std::vector<std::size_t> local(horizon + 1, 0);
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < n_runs; ++r) {
      count_run(k, initial, prob, eps, horizon, seed, static_cast<std::size_t>(r), local);
    }
#pragma omp critical(sgo_success_curve)
    for (std::size_t t = 0; t <= horizon; ++t) totals[t] += local[t];
  }
  return make_curve(eps, horizon, runs, std::move(totals));
}

SuccessCurve estimate_success_curve(const SGoalConfig& config, const OptimizationProblem& prob, double eps,
                                    std::size_t horizon, std::size_t runs, std::uint64_t seed) {
  return estimate_success_curve(make_algorithm_kernel(config, prob),
                                uniform_initializer(prob.space(), config.population_size), prob, eps, horizon, runs,
                                seed);
}

std::vector<RunTrace> collect_run_traces(const Kernel& k, const StateSampler& initial, const OptimizationProblem& prob,
                                         std::size_t horizon, std::size_t runs, std::uint64_t seed) {
  std::vector<RunTrace> traces(runs);
  const auto n_runs = static_cast<std::ptrdiff_t>(runs);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n_runs; ++r) {
    run_chain_into(k, initial, prob, horizon, seed, static_cast<std::size_t>(r), traces[static_cast<std::size_t>(r)]);
  }
  return traces;
}

SuccessCurve success_curve_from_traces(const std::vector<RunTrace>& traces, double eps) {
  check_eps(eps);
  if (traces.empty()) throw Error(ErrorCode::invalid_argument, "no runs");
  const std::size_t horizon = traces.front().gaps.size() - 1;
  std::vector<std::size_t> counts(horizon + 1, 0);
  for (const auto& tr : traces) {
    for (std::size_t t = 0; t <= horizon; ++t) counts[t] += tr.gaps[t] < eps ? 1 : 0;
  }
  return make_curve(eps, horizon, traces.size(), std::move(counts));
}

std::string_view to_string(DeltaMethod m) noexcept {
  return m == DeltaMethod::exact_enumeration ? "exact-enumeration" : "monte-carlo-min";
}

double mass_into_eps_set(const Kernel& k, const Population& x, const OptimizationProblem& prob, double eps) {
  double mass = 0.0;
  for (const auto& [y, p] : k.exact_row(x)) {
    if (optimality_gap(y, prob) < eps) mass += p;
  }
  return mass;
}

DeltaEstimate estimate_delta_exact(const Kernel& k, const OptimizationProblem& prob, double eps,
                                   std::size_t state_cap) {
  check_eps(eps);
  if (!k.has_exact()) throw Error(ErrorCode::oracle_unavailable, "kernel '" + k.name() + "' has no exact rows");
  DeltaEstimate est;
  est.eps = eps;
  est.method = DeltaMethod::exact_enumeration;
  est.certifying = true;
  est.delta = std::numeric_limits<double>::infinity();
  for (const auto& x : enumerate_for(k, prob, state_cap)) {
    if (optimality_gap(x, prob) < eps) continue;
    const double mass = mass_into_eps_set(k, x, prob, eps);
    est.per_state.emplace_back(x, mass);
    if (mass < est.delta) {
      est.delta = mass;
      est.argmin_state = x;
    }
  }
  if (est.per_state.empty()) {
    throw Error(ErrorCode::degenerate_problem, "every state is already eps-optimal");
  }
  est.delta = std::clamp(est.delta, 0.0, 1.0);
  return est;
}

DeltaEstimate estimate_delta_monte_carlo(const Kernel& k, const StateSampler& states, const OptimizationProblem& prob,
                                         double eps, const MonteCarloBudget& budget) {
  check_eps(eps);
  DeltaEstimate est;
  est.eps = eps;
  est.method = DeltaMethod::monte_carlo_min;
  est.certifying = false;
  est.delta = 1.0;
  RandomStream rng(budget.seed);
  std::size_t attempts = 0;
  const std::size_t max_attempts = std::max<std::size_t>(budget.states * 100, 1000);
  while (est.per_state.size() < budget.states && attempts < max_attempts) {
    ++attempts;
    RandomStream s_state = rng.derive(0);
    Population x = states(s_state);
    if (optimality_gap(x, prob) < eps) continue;
    std::size_t hits = 0;
    for (std::size_t s = 0; s < budget.samples_per_state; ++s) {
      RandomStream step = rng.derive(s + 1);
      if (optimality_gap(k.sample(x, step), prob) < eps) ++hits;
    }
    const double lower = wilson_interval(hits, budget.samples_per_state).lo;
    est.per_state.emplace_back(x, lower);
    if (lower < est.delta || !est.argmin_state) {
      est.delta = std::min(est.delta, lower);
      if (lower <= est.delta) est.argmin_state = x;
    }
  }
  if (est.per_state.empty()) {
    throw Error(ErrorCode::degenerate_problem, "no non-optimal state was sampled");
  }
  return est;
}

double geometric_bound(double delta, std::size_t t) {
  double miss = 1.0;
  for (std::size_t i = 0; i < t; ++i) miss *= (1.0 - delta);
  return 1.0 - miss;
}

std::string_view to_string(BoundVerdict v) noexcept {
  switch (v) {
    case BoundVerdict::satisfied: return "satisfied";
    case BoundVerdict::violated: return "violated";
    case BoundVerdict::premise_violated: return "premise-violated";
  }
  return "?";
}

bool GeometricBoundCheck::all_satisfied() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](BoundVerdict v) { return v == BoundVerdict::satisfied; });
}

GeometricBoundCheck check_geometric_bound(const SuccessCurve& curve, const DeltaEstimate& delta, bool absorption) {
  if (curve.eps != delta.eps) throw Error(ErrorCode::invalid_comparison, "curve and delta use different eps");
  GeometricBoundCheck out;
  out.absorption = absorption;
  const bool premise = delta.delta > 0.0 && absorption;
  if (delta.delta <= 0.0) {
    out.premise_note = "premise violated: delta=0";
  } else if (!absorption) {
    out.premise_note = "premise violated: eps-set not absorbing";
  } else if (!delta.certifying) {
    out.premise_note = "delta estimated by sampling (non-certifying)";
  }
  for (std::size_t t = 0; t <= curve.horizon; ++t) {
    const double b = geometric_bound(delta.delta, t);
    out.bound.push_back(b);
    if (!premise) {
      out.verdicts.push_back(BoundVerdict::premise_violated);
    } else {
      out.verdicts.push_back(curve.ci[t].hi >= b ? BoundVerdict::satisfied : BoundVerdict::violated);
    }
  }
  return out;
}

std::vector<double> exact_success_probabilities(const TransitionMatrix& m, const std::vector<double>& initial,
                                                const OptimizationProblem& prob, double eps, std::size_t horizon) {
  check_eps(eps);
  if (m.rows() != m.cols()) throw Error(ErrorCode::invalid_chain, "success probabilities need a square kernel");
  std::vector<bool> optimal(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) optimal[c] = optimality_gap(m.col_states[c], prob) < eps;
  std::vector<double> out;
  std::vector<double> dist = initial;
  for (std::size_t t = 0; t <= horizon; ++t) {
    if (t > 0) dist = propagate(dist, m);
    double p = 0.0;
    for (std::size_t c = 0; c < dist.size(); ++c) {
      if (optimal[c]) p += dist[c];
    }
    out.push_back(p);
  }
  return out;
}

std::vector<double> uniform_distribution(std::size_t states) {
  return std::vector<double>(states, 1.0 / static_cast<double>(states));
}

std::vector<double> exact_worst_case_success(const TransitionMatrix& m, const OptimizationProblem& prob, double eps,
                                             std::size_t horizon) {
  std::vector<double> worst(horizon + 1, 1.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::vector<double> start(m.rows(), 0.0);
    start[r] = 1.0;
    const auto probs = exact_success_probabilities(m, start, prob, eps, horizon);
    for (std::size_t t = 0; t <= horizon; ++t) worst[t] = std::min(worst[t], probs[t]);
  }
  return worst;
}

AbsorptionResult check_absorption_exact(const Kernel& k, const OptimizationProblem& prob, double eps,
                                        std::size_t state_cap) {
  check_eps(eps);
  AbsorptionResult out;
  for (const auto& x : enumerate_for(k, prob, state_cap)) {
    if (optimality_gap(x, prob) >= eps) continue;
    ++out.states_checked;
    if (mass_into_eps_set(k, x, prob, eps) < 1.0 - 1e-12) {
      out.absorbing = false;
      out.counterexample = x;
      break;
    }
  }
  return out;
}

AbsorptionResult check_absorption_sampled(const Kernel& k, const StateSampler& states, const OptimizationProblem& prob,
                                          double eps, std::size_t samples, std::uint64_t seed) {
  check_eps(eps);
  AbsorptionResult out;
  for (std::size_t i = 0; i < samples; ++i) {
    RandomStream rng = RandomStream::substream(seed, i);
    RandomStream s_state = rng.derive(0);
    const Population x = states(s_state);
    if (optimality_gap(x, prob) >= eps) continue;
    ++out.states_checked;
    RandomStream s_step = rng.derive(1);
    if (optimality_gap(k.sample(x, s_step), prob) >= eps) {
      out.absorbing = false;
      out.counterexample = x;
      break;
    }
  }
  return out;
}

ElitismResult check_elitist(const Kernel& k, const StateSampler& states, const OptimizationProblem& prob,
                            std::size_t samples, std::uint64_t seed) {
  ElitismResult out;
  out.samples = samples;
  const auto n = static_cast<std::ptrdiff_t>(samples);
  std::size_t violations = 0;
  std::vector<ElitismViolation> found;
#pragma omp parallel
  {
    std::vector<ElitismViolation> local;
    std::size_t local_count = 0;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      auto s = elitism_sample(k, states, prob, seed, static_cast<std::size_t>(i));
      if (s.violated) {
        ++local_count;
        if (local.size() < kMaxCounterexamples) local.push_back(std::move(s.detail));
      }
    }
#pragma omp critical(sgo_elitism)
    {
      violations += local_count;
      found.insert(found.end(), local.begin(), local.end());
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.sample < b.sample; });
  if (found.size() > kMaxCounterexamples) found.resize(kMaxCounterexamples);
  out.violations = violations;
  out.elitist = violations == 0;
  out.counterexamples = std::move(found);
  return out;
}

BoundedFromZeroResult check_bounded_from_zero_exact(const Kernel& k, const OptimizationProblem& prob,
                                                    const std::vector<double>& eps_list, std::size_t state_cap) {
  BoundedFromZeroResult out;
  out.bounded = !eps_list.empty();
  for (double eps : eps_list) {
    out.per_eps.push_back(estimate_delta_exact(k, prob, eps, state_cap));
    if (!(out.per_eps.back().delta > 0.0)) out.bounded = false;
  }
  return out;
}

BoundedFromZeroResult check_bounded_from_zero_monte_carlo(const Kernel& k, const StateSampler& states,
                                                          const OptimizationProblem& prob,
                                                          const std::vector<double>& eps_list,
                                                          const MonteCarloBudget& budget) {
  BoundedFromZeroResult out;
  out.bounded = !eps_list.empty();
  for (double eps : eps_list) {
    out.per_eps.push_back(estimate_delta_monte_carlo(k, states, prob, eps, budget));
    if (!(out.per_eps.back().delta > 0.0)) out.bounded = false;
  }
  return out;
}

double chi_square_survival(double statistic, std::size_t dof) {
  if (dof == 0) return statistic > 0.0 ? 0.0 : 1.0;
  if (!std::isfinite(statistic)) return 0.0;
  boost::math::chi_squared dist(static_cast<double>(dof));
  return boost::math::cdf(boost::math::complement(dist, std::max(0.0, statistic)));
}

RowFit compare_counts(const Population& state, const Distribution& exact,
                      const std::map<Population, std::size_t>& counts, std::size_t samples) {
  RowFit fit;
  fit.state = state;
  const double n = static_cast<double>(samples);
  double tv = 0.0;
  double chi = 0.0;
  std::size_t support = 0;
  for (const auto& [y, p] : exact) {
    if (p <= 0.0) continue;
    ++support;
    auto it = counts.find(y);
    const double observed = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    tv += std::abs(observed / n - p);
    const double expected = n * p;
    chi += (observed - expected) * (observed - expected) / expected;
  }
  for (const auto& [y, c] : counts) {
    auto it = exact.find(y);
    if (it == exact.end() || it->second <= 0.0) {
      tv += static_cast<double>(c) / n;
      chi = std::numeric_limits<double>::infinity();
    }
  }
  fit.total_variation = 0.5 * tv;
  fit.chi_square = chi;
  fit.degrees_of_freedom = support > 0 ? support - 1 : 0;
  fit.p_value = chi_square_survival(chi, fit.degrees_of_freedom);
  return fit;
}

std::vector<RowFit> kernel_goodness_of_fit(const Kernel& k, const SearchSpace& space, std::size_t samples_per_row,
                                           std::uint64_t seed, std::size_t state_cap) {
  const auto states = gof_states(k, space, state_cap);
  std::vector<RowFit> fits(states.size());
  const auto rows = static_cast<std::ptrdiff_t>(states.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    fits[ur] = fit_row(k, states[ur], samples_per_row, seed, ur);
  }
  return fits;
}

CompleteConvergenceDiagnostic complete_convergence_diagnostic(const SuccessCurve& curve, double delta) {
  CompleteConvergenceDiagnostic out;
  out.reference = delta > 0.0 ? (1.0 - delta) / delta : std::numeric_limits<double>::infinity();
  double sum = 0.0;
  double sum_lower = 0.0;
  out.partial_sums.push_back(0.0);
  out.partial_sums_lower.push_back(0.0);
  for (std::size_t t = 1; t <= curve.horizon; ++t) {
    sum += 1.0 - curve.rate(t);
    sum_lower += 1.0 - curve.ci[t].hi;
    out.partial_sums.push_back(sum);
    out.partial_sums_lower.push_back(sum_lower);
  }
  out.dominated = std::all_of(out.partial_sums_lower.begin(), out.partial_sums_lower.end(),
                              [&](double s) { return s <= out.reference; });
  return out;
}

namespace serial {

SuccessCurve estimate_success_curve(const Kernel& k, const StateSampler& initial, const OptimizationProblem& prob,
                                    double eps, std::size_t horizon, std::size_t runs, std::uint64_t seed) {
  validate_curve_args(prob, eps, runs);
  std::vector<std::size_t> counts(horizon + 1, 0);
  for (std::size_t r = 0; r < runs; ++r) count_run(k, initial, prob, eps, horizon, seed, r, counts);
  return make_curve(eps, horizon, runs, std::move(counts));
}

ElitismResult check_elitist(const Kernel& k, const StateSampler& states, const OptimizationProblem& prob,
                            std::size_t samples, std::uint64_t seed) {
  ElitismResult out;
  out.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    auto s = elitism_sample(k, states, prob, seed, i);
    if (!s.violated) continue;
    ++out.violations;
    if (out.counterexamples.size() < kMaxCounterexamples) out.counterexamples.push_back(std::move(s.detail));
  }
  out.elitist = out.violations == 0;
  return out;
}

std::vector<RowFit> kernel_goodness_of_fit(const Kernel& k, const SearchSpace& space, std::size_t samples_per_row,
                                           std::uint64_t seed, std::size_t state_cap) {
  const auto states = gof_states(k, space, state_cap);
  std::vector<RowFit> fits;
  fits.reserve(states.size());
  for (std::size_t r = 0; r < states.size(); ++r) fits.push_back(fit_row(k, states[r], samples_per_row, seed, r));
  return fits;
}

}  // namespace serial

}  // namespace sgo
