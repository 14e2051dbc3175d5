#include <algorithm>
#include <cmath>
#include <numbers>

#include "sgo/bench.hpp"
#include "sgo/error.hpp"
#include "sgo/structural.hpp"

namespace sgo {

namespace {

double sphere(const Individual& x) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * x[k];
  return s;
}

double rosenbrock(const Individual& x) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const double a = x[k + 1] - x[k] * x[k];
    const double b = 1.0 - x[k];
    s += 100.0 * a * a + b * b;
  }
  return s;
}

// Written as a sum of non-negative terms so f >= 0 holds in floating point.
double rastrigin(const Individual& x) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    s += x[k] * x[k] + 10.0 * (1.0 - std::cos(2.0 * std::numbers::pi * x[k]));
  }
  return s;
}

double onemax_min(const Individual& x) {
  double zeros = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) zeros += x[k] == 0.0 ? 1.0 : 0.0;
  return zeros;
}

// Per block with u ones: 0 when u = 4, otherwise u + 1.
double deceptive_trap(const Individual& x) {
  double s = 0.0;
  for (std::size_t start = 0; start < x.size(); start += kTrapBlock) {
    std::size_t ones = 0;
    for (std::size_t k = start; k < start + kTrapBlock; ++k) ones += x[k] != 0.0 ? 1 : 0;
    s += ones == kTrapBlock ? 0.0 : static_cast<double>(ones + 1);
  }
  return s;
}

}  // namespace

const std::vector<ProblemInfo>& builtin_problems() {
  static const std::vector<ProblemInfo> catalog{
      {"sphere", SpaceKind::real_box, 5, "sum x_k^2 on [-5.12, 5.12]^d, f* = 0 at the origin"},
      {"rosenbrock", SpaceKind::real_box, 2, "banana valley on [-2.048, 2.048]^d, f* = 0 at all ones"},
      {"rastrigin", SpaceKind::real_box, 5, "multimodal cosine grid on [-5.12, 5.12]^d, f* = 0 at the origin"},
      {"onemax-min", SpaceKind::bitstring, 8, "number of zero bits, f* = 0 at all ones"},
      {"deceptive-trap", SpaceKind::bitstring, 8, "order-4 traps leading away from all ones, f* = 0"},
  };
  return catalog;
}

OptimizationProblem make_problem(const std::string& id, std::size_t dimension) {
  if (dimension == 0) throw Error(ErrorCode::invalid_config, "problem dimension must be >= 1");
  if (id == "sphere") return {id, SearchSpace::real_box(dimension, -5.12, 5.12), sphere, 0.0};
  if (id == "rosenbrock") {
    if (dimension < 2) throw Error(ErrorCode::invalid_config, "rosenbrock needs dimension >= 2");
    return {id, SearchSpace::real_box(dimension, -2.048, 2.048), rosenbrock, 0.0};
  }
  if (id == "rastrigin") return {id, SearchSpace::real_box(dimension, -5.12, 5.12), rastrigin, 0.0};
  if (id == "onemax-min") return {id, SearchSpace::bitstring(dimension), onemax_min, 0.0};
  if (id == "deceptive-trap") {
    if (dimension % kTrapBlock != 0) {
      throw Error(ErrorCode::invalid_config, "deceptive-trap needs a dimension divisible by 4");
    }
    return {id, SearchSpace::bitstring(dimension), deceptive_trap, 0.0};
  }
  throw Error(ErrorCode::unknown_problem, "no builtin problem named '" + id + "'");
}

const std::vector<std::string>& kernel_ids() {
  static const std::vector<std::string> ids{"hc",  "hc-neutral", "phc",      "gga",
                                            "ssga", "de",        "single-flip-hc", "identity", "pure-mutation"};
  return ids;
}

bool is_kernel_id(const std::string& id) {
  const auto& ids = kernel_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::size_t default_population(const std::string& kernel_id) {
  if (kernel_id == "phc" || kernel_id == "gga" || kernel_id == "ssga") return 2;
  if (kernel_id == "de") return 4;
  return 1;
}

Kernel make_named_kernel(const std::string& kernel_id, const OptimizationProblem& prob, std::size_t n,
                         const OperatorParams& params) {
  if (auto alg = parse_algorithm(kernel_id)) {
    return make_algorithm_kernel(SGoalConfig{*alg, n, 0, params, 0}, prob);
  }
  if (kernel_id == "hc-neutral" || kernel_id == "single-flip-hc") {
    OperatorParams p = params;
    if (kernel_id == "hc-neutral") p.neutral = true;
    if (kernel_id == "single-flip-hc") p.single_flip = true;
    return make_algorithm_kernel(SGoalConfig{Algorithm::hc, n, 0, p, 0}, prob);
  }
  if (kernel_id == "identity") return identity(n);
  if (kernel_id == "pure-mutation") {
    const Kernel m = make_mutation(prob.space(), params).kernel;
    if (n == 1) return m;
    std::vector<Kernel> slots;
    for (std::size_t i = 1; i <= n; ++i) slots.push_back(compose(m, projection_kernel(IndexSet({i}, n))));
    return join(std::move(slots));
  }
  throw Error(ErrorCode::invalid_config, "unknown kernel id '" + kernel_id + "'");
}

}  // namespace sgo
