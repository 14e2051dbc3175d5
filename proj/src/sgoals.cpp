#include "sgo/sgoals.hpp"

#include <algorithm>
#include <chrono>

#include "sgo/error.hpp"
#include "sgo/structural.hpp"

namespace sgo {

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::hc: return "hc";
    case Algorithm::phc: return "phc";
    case Algorithm::gga: return "gga";
    case Algorithm::ssga: return "ssga";
    case Algorithm::de: return "de";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view id) noexcept {
  for (auto a : all_algorithms()) {
    if (to_string(a) == id) return a;
  }
  return std::nullopt;
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all{Algorithm::hc, Algorithm::phc, Algorithm::gga, Algorithm::ssga,
                                          Algorithm::de};
  return all;
}

Kernel vr_kernel(const Kernel& variation, const Kernel& replacement, VrOrder order) {
  const std::size_t eta = variation.input_arity();
  if (replacement.input_arity() != eta + variation.output_arity()) {
    throw Error(ErrorCode::invalid_composition, "replacement arity must equal population plus variants");
  }
  Kernel generated = order == VrOrder::population_first ? join({identity(eta), variation})
                                                        : join({variation, identity(eta)});
  return compose(replacement, generated);
}

Kernel hc_replacement_kernel(const OptimizationProblem& prob) {
  return compose(projection_kernel(IndexSet({1}, 2)), sort_two_kernel(prob));
}

Kernel hc_kernel(const Kernel& variate, bool neutral, const OptimizationProblem& prob) {
  if (variate.input_arity() != 1 || variate.output_arity() != 1) {
    throw Error(ErrorCode::invalid_operator, "HC variate must map one individual to one individual");
  }
  return vr_kernel(variate, hc_replacement_kernel(prob),
                   neutral ? VrOrder::population_first : VrOrder::variation_first);
}

Kernel phc_kernel(const Kernel& variate, bool neutral, std::size_t n, const OptimizationProblem& prob) {
  if (n < 1) throw Error(ErrorCode::invalid_config, "PHC needs n >= 1");
  const Kernel hc = hc_kernel(variate, neutral, prob);
  std::vector<Kernel> slots;
  slots.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) slots.push_back(compose(hc, projection_kernel(IndexSet({i}, n))));
  return join(std::move(slots));
}

Kernel parent_pick_kernel(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::invalid_config, "parent selection needs n >= 2");
  std::vector<Kernel> pairs;
  for (std::size_t a = 1; a <= n; ++a) {
    for (std::size_t b = 1; b <= n; ++b) {
      if (a != b) pairs.push_back(join({projection_kernel(IndexSet({a}, n)), projection_kernel(IndexSet({b}, n))}));
    }
  }
  const double w = 1.0 / static_cast<double>(pairs.size());
  std::vector<double> weights(pairs.size(), w);
  return mix(std::move(pairs), std::move(weights));
}

namespace {

void check_rate(double cr) {
  if (!(cr >= 0.0 && cr <= 1.0)) throw Error(ErrorCode::invalid_config, "crossover rate must lie in [0, 1]");
}

void check_pair_operators(const Kernel& xover, const Kernel& mutate) {
  if (xover.input_arity() != 2 || xover.output_arity() != 2) {
    throw Error(ErrorCode::invalid_operator, "crossover must map two parents to two children");
  }
  if (mutate.input_arity() != 1 || mutate.output_arity() != 1) {
    throw Error(ErrorCode::invalid_operator, "mutation must map one individual to one individual");
  }
}

}  // namespace

Kernel gga_kernel(const Kernel& xover, const Kernel& mutate, double crossover_rate, std::size_t n) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::invalid_config, "GGA needs an even population size");
  check_rate(crossover_rate);
  check_pair_operators(xover, mutate);
  // Bernoulli(CR): Mutate(XOver(a, b)); otherwise the parents pass unchanged.
  const Kernel breed = mix({compose(pairwise(mutate), xover), identity(2)}, {crossover_rate, 1.0 - crossover_rate});
  const Kernel offspring = compose(breed, parent_pick_kernel(n));
  return join(std::vector<Kernel>(n / 2, offspring));
}

Kernel ssga_kernel(const Kernel& xover, const Kernel& mutate, double crossover_rate, std::size_t n,
                   const OptimizationProblem& prob) {
  if (n < 2) throw Error(ErrorCode::invalid_config, "SSGA needs n >= 2");
  check_rate(crossover_rate);
  check_pair_operators(xover, mutate);
  // Bernoulli(CR): Mutate(XOver(a, b)); otherwise Mutate(a, b).
  const Kernel mutate_pair = pairwise(mutate);
  const Kernel v = mix({compose(mutate_pair, xover), mutate_pair}, {crossover_rate, 1.0 - crossover_rate});
  // State after variation: (c1, c2, P_1, ..., P_n) with P randomly permuted.
  const Kernel variation =
      compose(join({compose(v, projection_kernel(IndexSet({1, 2}, n))), identity(n)}), random_scan_permutation(n));
  const Kernel best_two = compose(best_two_of_four_kernel(prob), projection_kernel(IndexSet::range(1, 4, n + 2)));
  const Kernel replacement =
      n == 2 ? best_two : join({best_two, projection_kernel(IndexSet::range(5, n + 2, n + 2))});
  return compose(replacement, variation);
}

std::array<std::size_t, 3> pick_distinct_parents(std::size_t n, std::size_t target, RandomStream& rng) {
  if (n < 4) throw Error(ErrorCode::invalid_config, "DE needs n >= 4");
  std::array<std::size_t, 3> picked{};
  for (std::size_t slot = 0; slot < 3; ++slot) {
    std::size_t candidate = 0;
    do {
      candidate = rng.uniform_index(0, n - 1);
    } while (candidate == target || std::find(picked.begin(), picked.begin() + slot, candidate) != picked.begin() + slot);
    picked[slot] = candidate;
  }
  return picked;
}

Individual de_trial(const Individual& target, const Individual& a, const Individual& b, const Individual& c,
                    double difference_weight, const std::vector<bool>& cross) {
  Individual q = target;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (cross[k]) q[k] = a[k] + difference_weight * (b[k] - c[k]);
  }
  return q;
}

Kernel de_kernel(double difference_weight, double crossover_rate, std::size_t n, const OptimizationProblem& prob,
                 bool greedy) {
  if (prob.space().is_bitstring()) throw Error(ErrorCode::invalid_space, "DE needs a real box");
  if (n < 4) throw Error(ErrorCode::invalid_config, "DE needs n >= 4");
  check_rate(crossover_rate);
  if (!(difference_weight >= 0.0 && difference_weight <= 2.0)) {
    throw Error(ErrorCode::invalid_config, "difference weight must lie in [0, 2]");
  }
  const SearchSpace space = prob.space();
  std::vector<Kernel> slots;
  slots.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Kernel trial = primitive(
        "de-trial-" + std::to_string(i + 1), n, 1,
        [=](const Population& p, RandomStream& rng) {
          const auto [a, b, c] = pick_distinct_parents(n, i, rng);
          const std::size_t d = space.dimension();
          const std::size_t forced = rng.uniform_index(0, d - 1);
          std::vector<bool> cross(d);
          for (std::size_t k = 0; k < d; ++k) cross[k] = rng.bernoulli(crossover_rate) || k == forced;
          return Population{clamp_to_space(de_trial(p[i], p[a], p[b], p[c], difference_weight, cross), space)};
        });
    if (greedy) {
      // r_HC(P_i, q): the trial wins ties.
      trial = compose(hc_replacement_kernel(prob), join({projection_kernel(IndexSet({i + 1}, n)), trial}));
    }
    slots.push_back(std::move(trial));
  }
  return join(std::move(slots));
}

void validate(const SGoalConfig& config, const OptimizationProblem& prob) {
  const std::size_t n = config.population_size;
  const auto& p = config.params;
  const auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_config, msg); };
  if (n < 1) fail("population size must be >= 1");
  if (p.flip_prob && !(*p.flip_prob >= 0.0 && *p.flip_prob <= 1.0)) fail("flip_prob must lie in [0, 1]");
  if (!(p.sigma > 0.0)) fail("sigma must be > 0");
  if (!(p.crossover_rate >= 0.0 && p.crossover_rate <= 1.0)) fail("crossover rate must lie in [0, 1]");
  if (!(p.difference_weight >= 0.0 && p.difference_weight <= 2.0)) fail("difference weight must lie in [0, 2]");
  switch (config.algorithm) {
    case Algorithm::hc:
      if (n != 1) fail("hc works on a single individual (n = 1)");
      break;
    case Algorithm::phc:
      break;
    case Algorithm::gga:
      if (n < 2 || n % 2 != 0) fail("gga needs an even population size");
      break;
    case Algorithm::ssga:
      if (n < 2) fail("ssga needs n >= 2");
      break;
    case Algorithm::de:
      if (n < 4) fail("de needs n >= 4");
      if (prob.space().is_bitstring()) fail("de needs a real-valued problem");
      break;
  }
}

Kernel make_algorithm_kernel(const SGoalConfig& config, const OptimizationProblem& prob) {
  validate(config, prob);
  const auto& space = prob.space();
  const auto& p = config.params;
  const std::size_t n = config.population_size;
  switch (config.algorithm) {
    case Algorithm::hc:
      return hc_kernel(make_variate(space, p).kernel, p.neutral, prob);
    case Algorithm::phc:
      return phc_kernel(make_variate(space, p).kernel, p.neutral, n, prob);
    case Algorithm::gga:
      return gga_kernel(make_crossover(space).kernel, make_mutation(space, p).kernel, p.crossover_rate, n);
    case Algorithm::ssga:
      return ssga_kernel(make_crossover(space).kernel, make_mutation(space, p).kernel, p.crossover_rate, n, prob);
    case Algorithm::de:
      return de_kernel(p.difference_weight, p.crossover_rate, n, prob, p.de_greedy);
  }
  throw Error(ErrorCode::invalid_config, "unknown algorithm");
}

StateSampler uniform_initializer(const SearchSpace& space, std::size_t n) {
  return [space, n](RandomStream& rng) { return random_population(space, n, rng); };
}

RunResult run_sgoal(const SGoalConfig& config, const OptimizationProblem& prob, std::uint64_t run_index) {
  const auto start = std::chrono::steady_clock::now();
  const Kernel kernel = make_algorithm_kernel(config, prob);
  RandomStream rng = RandomStream::substream(config.seed, run_index);
  RunResult result;
  result.trace = iterate_chain(kernel, uniform_initializer(prob.space(), config.population_size), config.iterations,
                               rng, &prob);
  result.best_so_far.reserve(result.trace.states.size());
  for (const auto& state : result.trace.states) {
    const double f = best_value(state, prob);
    result.best_so_far.push_back(result.best_so_far.empty() ? f : std::min(f, result.best_so_far.back()));
  }
  const Population& last = result.trace.states.back();
  result.best = last[best_index(last, prob)];
  result.best_f = prob.evaluate(result.best);
  result.best_so_far_f = result.best_so_far.back();
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace sgo
