#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sgo/convergence.hpp"
#include "sgo/error.hpp"
#include "sgo/operators.hpp"
#include "sgo/sgoals.hpp"
#include "support.hpp"

using namespace sgo;
using testing::bits;

namespace {

const OptimizationProblem& onemax2() {
  static const auto p = testing::onemax(2);
  return p;
}

Kernel hc2() { return hc_kernel(bit_flip_kernel(2, 0.5), false, onemax2()); }

// Jumps straight to the all-ones string.
Kernel jump_to_optimum(std::size_t len) {
  return deterministic("jump", 1, 1, [len](const Population&) { return bits(std::string(len, '1')); });
}

// Wilson interval from the textbook formula, written out independently.
Interval wilson_oracle(double k, double n) {
  const double z = 1.959963984540054;
  const double p = k / n;
  const double denom = 1 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  return {centre - half, centre + half};
}

StateSampler uniform(const OptimizationProblem& prob, std::size_t n) { return uniform_initializer(prob.space(), n); }

}  // namespace

TEST_CASE("Wilson interval") {
  for (auto [k, n] : {std::pair{0, 10}, {3, 10}, {50, 100}, {99, 100}, {100, 100}, {4423, 10000}}) {
    const auto got = wilson_interval(k, n);
    const auto want = wilson_oracle(k, n);
    CHECK(got.lo == doctest::Approx(std::max(0.0, want.lo)).epsilon(1e-12));
    CHECK(got.hi == doctest::Approx(std::min(1.0, want.hi)).epsilon(1e-12));
    CHECK(got.lo <= k / double(n));
    CHECK(got.hi >= k / double(n));
  }
  CHECK(wilson_interval(0, 10).lo == 0.0);
  CHECK(wilson_interval(10, 10).hi == 1.0);
  CHECK(wilson_interval(50, 100).lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(wilson_interval(0, 0).lo == 0.0);
  CHECK(wilson_interval(0, 0).hi == 1.0);
  CHECK_THROWS_AS(wilson_interval(1, 0), Error);
  CHECK_THROWS_AS(wilson_interval(3, 2), Error);
}

TEST_CASE("geometric bound") {
  CHECK(geometric_bound(0.1, 0) == 0.0);
  CHECK(geometric_bound(0.1, 1) == doctest::Approx(0.1));
  CHECK(geometric_bound(0.1, 2) == doctest::Approx(0.19));
  CHECK(geometric_bound(1.0, 3) == 1.0);
  CHECK(geometric_bound(0.25, 5) == doctest::Approx(1.0 - 0.2373046875).epsilon(1e-12));
  CHECK(geometric_bound(0.0, 50) == 0.0);
}

TEST_CASE("exact delta") {
  const auto d = estimate_delta_exact(hc2(), onemax2(), 1.0);
  CHECK(d.delta == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(d.certifying);
  CHECK(d.method == DeltaMethod::exact_enumeration);
  CHECK(d.per_state.size() == 3);
  REQUIRE(d.argmin_state);
  CHECK(*d.argmin_state == bits("00"));

  CHECK(estimate_delta_exact(identity(1), onemax2(), 1.0).delta == 0.0);
  CHECK(estimate_delta_exact(jump_to_optimum(2), onemax2(), 1.0).delta == 1.0);
  // Every state already optimal: nothing to minimize over.
  try {
    estimate_delta_exact(hc2(), onemax2(), 5.0);
    FAIL("expected degenerate_problem");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_problem);
  }
  CHECK(mass_into_eps_set(hc2(), bits("01"), onemax2(), 1.0) == 0.25);
}

TEST_CASE("exact delta matches a brute-force row oracle for HC l=3") {
  const auto prob = testing::onemax(3);
  const double p = 0.3;
  const auto k = hc_kernel(bit_flip_kernel(3, p), false, prob);
  for (double eps : {1.0, 2.0}) {
    double worst = 1.0;
    for (int x = 0; x < 8; ++x) {
      const int zx = 3 - __builtin_popcount(x);
      if (zx < eps) continue;
      double mass = 0.0;
      for (int y = 0; y < 8; ++y) {
        const int zy = 3 - __builtin_popcount(y);
        const int flips = __builtin_popcount(x ^ y);
        if (zy < eps) mass += std::pow(p, flips) * std::pow(1 - p, 3 - flips);
      }
      worst = std::min(worst, mass);
    }
    CHECK(estimate_delta_exact(k, prob, eps).delta == doctest::Approx(worst).epsilon(1e-12));
  }
}

TEST_CASE("Monte Carlo delta is a conservative, non-certifying estimate") {
  const MonteCarloBudget budget{50, 4000, 7};
  const auto d = estimate_delta_monte_carlo(hc2(), uniform(onemax2(), 1), onemax2(), 1.0, budget);
  CHECK_FALSE(d.certifying);
  CHECK(d.method == DeltaMethod::monte_carlo_min);
  CHECK(d.delta <= 0.25);
  CHECK(d.delta > 0.2);
  CHECK(estimate_delta_monte_carlo(identity(1), uniform(onemax2(), 1), onemax2(), 1.0, budget).delta == 0.0);
}

TEST_CASE("absorption") {
  CHECK(check_absorption_exact(hc2(), onemax2(), 1.0).absorbing);
  CHECK(check_absorption_exact(identity(1), onemax2(), 1.0).absorbing);
  const auto mut = check_absorption_exact(bit_flip_kernel(2, 0.5), onemax2(), 1.0);
  CHECK_FALSE(mut.absorbing);
  REQUIRE(mut.counterexample);
  CHECK(*mut.counterexample == bits("11"));
  CHECK(check_absorption_exact(hc2(), onemax2(), 1.0).states_checked == 1);

  CHECK(check_absorption_sampled(hc2(), uniform(onemax2(), 1), onemax2(), 1.0, 5000, 1).absorbing);
  CHECK_FALSE(check_absorption_sampled(bit_flip_kernel(2, 0.5), uniform(onemax2(), 1), onemax2(), 1.0, 5000, 1)
                  .absorbing);
}

TEST_CASE("elitism check") {
  const auto prob = testing::onemax(8);
  const auto init = uniform(prob, 1);
  const auto hc = check_elitist(hc_kernel(bit_flip_kernel(8, 0.125), false, prob), init, prob, 5000, 3);
  CHECK(hc.elitist);
  CHECK(hc.samples == 5000);
  CHECK(hc.counterexamples.empty());

  const auto mut = check_elitist(bit_flip_kernel(8, 0.125), init, prob, 5000, 3);
  CHECK_FALSE(mut.elitist);
  CHECK(mut.violations > 0);
  REQUIRE_FALSE(mut.counterexamples.empty());
  CHECK(mut.counterexamples.size() <= kMaxCounterexamples);
  for (const auto& v : mut.counterexamples) {
    CHECK(v.output_value > v.input_value);
    CHECK(best_value(v.input, prob) == v.input_value);
    CHECK(best_value(v.output, prob) == v.output_value);
  }
  for (std::size_t i = 1; i < mut.counterexamples.size(); ++i) {
    CHECK(mut.counterexamples[i - 1].sample < mut.counterexamples[i].sample);
  }
}

TEST_CASE("bounded from zero") {
  const auto yes = check_bounded_from_zero_exact(hc2(), onemax2(), {1.0, 2.0});
  CHECK(yes.bounded);
  CHECK(yes.per_eps.size() == 2);
  CHECK_FALSE(check_bounded_from_zero_exact(identity(1), onemax2(), {1.0}).bounded);
  // Single-bit flips cannot reach "11" from "00" in one step.
  const auto sb = hc_kernel(single_bit_flip_kernel(2), false, onemax2());
  CHECK_FALSE(check_bounded_from_zero_exact(sb, onemax2(), {1.0}).bounded);
  CHECK(check_bounded_from_zero_exact(sb, onemax2(), {2.0}).bounded);

  const MonteCarloBudget budget{40, 2000, 5};
  CHECK(check_bounded_from_zero_monte_carlo(hc2(), uniform(onemax2(), 1), onemax2(), {1.0}, budget).bounded);
  CHECK_FALSE(
      check_bounded_from_zero_monte_carlo(sb, uniform(onemax2(), 1), onemax2(), {1.0}, budget).bounded);
}

TEST_CASE("lemma verdicts") {
  SuccessCurve curve;
  curve.eps = 1.0;
  curve.horizon = 2;
  curve.runs = 100;
  curve.successes = {25, 40, 100};
  for (auto s : curve.successes) curve.ci.push_back(wilson_interval(s, 100));

  DeltaEstimate d;
  d.eps = 1.0;
  d.delta = 0.5;
  const auto check = check_geometric_bound(curve, d, true);
  CHECK(check.bound.size() == 3);
  CHECK(check.verdicts[0] == BoundVerdict::satisfied);
  CHECK(check.verdicts[1] == BoundVerdict::violated);  // upper limit 0.498 < 0.5
  CHECK(check.verdicts[2] == BoundVerdict::satisfied);
  CHECK_FALSE(check.all_satisfied());

  d.delta = 0.0;
  const auto none = check_geometric_bound(curve, d, true);
  for (auto v : none.verdicts) CHECK(v == BoundVerdict::premise_violated);
  CHECK(none.premise_note == "premise violated: delta=0");

  d.delta = 0.5;
  const auto open = check_geometric_bound(curve, d, false);
  for (auto v : open.verdicts) CHECK(v == BoundVerdict::premise_violated);

  d.eps = 2.0;
  CHECK_THROWS_AS(check_geometric_bound(curve, d, true), Error);
}

TEST_CASE("exact success probabilities dominate the geometric bound") {
  const auto m = exact_matrix(hc2(), onemax2().space());
  const auto worst = exact_worst_case_success(m, onemax2(), 1.0, 12);
  const auto uni = exact_success_probabilities(m, uniform_distribution(m.rows()), onemax2(), 1.0, 12);
  for (std::size_t t = 0; t <= 12; ++t) {
    CHECK(worst[t] >= geometric_bound(0.25, t));
    CHECK(worst[t] == doctest::Approx(1.0 - std::pow(0.75, double(t))).epsilon(1e-12));
    CHECK(uni[t] == doctest::Approx(1.0 - std::pow(0.75, double(t + 1))).epsilon(1e-12));
  }
}

TEST_CASE("success curve") {
  const auto curve = estimate_success_curve(hc2(), uniform(onemax2(), 1), onemax2(), 1.0, 10, 10000, 42);
  CHECK(curve.successes.size() == 11);
  CHECK(curve.ci.size() == 11);
  for (std::size_t t = 0; t <= 10; ++t) {
    const double exact = 1.0 - std::pow(0.75, double(t + 1));
    CHECK(std::abs(curve.rate(t) - exact) < 4.0 * std::sqrt(exact * (1 - exact) / 10000) + 1e-12);
    if (t > 0) CHECK(curve.successes[t] >= curve.successes[t - 1]);  // absorbing and elitist
  }
  const auto again = estimate_success_curve(hc2(), uniform(onemax2(), 1), onemax2(), 1.0, 10, 10000, 42);
  CHECK(again.successes == curve.successes);

  const auto traces = collect_run_traces(hc2(), uniform(onemax2(), 1), onemax2(), 10, 10000, 42);
  CHECK(success_curve_from_traces(traces, 1.0).successes == curve.successes);
  for (const auto& tr : traces) {
    for (std::size_t t = 1; t < tr.gaps.size(); ++t) {
      CHECK(tr.gaps[t] <= tr.gaps[t - 1]);
      CHECK(tr.best_so_far[t] <= tr.best_so_far[t - 1]);
    }
  }
}

TEST_CASE("parallel drivers agree with the serial references") {
  const auto prob = testing::onemax(6);
  const auto k = make_algorithm_kernel({Algorithm::ssga, 4, 0, {}, 0}, prob);
  const auto init = uniform(prob, 4);
  const auto a = estimate_success_curve(k, init, prob, 1.0, 15, 800, 9);
  const auto b = serial::estimate_success_curve(k, init, prob, 1.0, 15, 800, 9);
  CHECK(a.successes == b.successes);

  const auto mut = bit_flip_kernel(6, 0.2);
  const auto ea = check_elitist(mut, uniform(prob, 1), prob, 3000, 4);
  const auto eb = serial::check_elitist(mut, uniform(prob, 1), prob, 3000, 4);
  CHECK(ea.violations == eb.violations);
  REQUIRE(ea.counterexamples.size() == eb.counterexamples.size());
  for (std::size_t i = 0; i < ea.counterexamples.size(); ++i) {
    CHECK(ea.counterexamples[i].sample == eb.counterexamples[i].sample);
    CHECK(ea.counterexamples[i].output == eb.counterexamples[i].output);
  }

  const auto ga = kernel_goodness_of_fit(hc2(), onemax2().space(), 2000, 5);
  const auto gb = serial::kernel_goodness_of_fit(hc2(), onemax2().space(), 2000, 5);
  REQUIRE(ga.size() == gb.size());
  for (std::size_t i = 0; i < ga.size(); ++i) {
    CHECK(ga[i].total_variation == gb[i].total_variation);
    CHECK(ga[i].chi_square == gb[i].chi_square);
  }
}

TEST_CASE("goodness of fit") {
  const auto space = SearchSpace::bitstring(2);
  const Kernel flip_all = deterministic("complement", 1, 1, [](const Population& x) {
    return Population{Individual({1.0 - x[0][0], 1.0 - x[0][1]})};
  });
  for (const auto& row : kernel_goodness_of_fit(flip_all, space, 500, 1)) {
    CHECK(row.total_variation == 0.0);
    CHECK(row.chi_square == 0.0);
    CHECK(row.p_value == 1.0);
  }
  const auto small = kernel_goodness_of_fit(hc2(), space, 10000, 2);
  const auto large = kernel_goodness_of_fit(hc2(), space, 100000, 2);
  double tv_small = 0.0, tv_large = 0.0;
  for (const auto& r : small) tv_small = std::max(tv_small, r.total_variation);
  for (const auto& r : large) tv_large = std::max(tv_large, r.total_variation);
  CHECK(tv_large < 0.01);
  CHECK(tv_large < tv_small);
  for (const auto& r : large) CHECK(r.p_value > 1e-4);

  // Counts on a state outside the exact support: infinite statistic.
  const Distribution exact{{bits("00"), 1.0}};
  const std::map<Population, std::size_t> counts{{bits("00"), 9}, {bits("11"), 1}};
  const auto fit = compare_counts(bits("00"), exact, counts, 10);
  CHECK(fit.total_variation == doctest::Approx(0.1));
  CHECK(std::isinf(fit.chi_square));
  CHECK(fit.p_value == 0.0);
}

TEST_CASE("chi-square survival") {
  CHECK(chi_square_survival(0.0, 3) == 1.0);
  CHECK(chi_square_survival(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(chi_square_survival(11.070497693516351, 5) == doctest::Approx(0.05).epsilon(1e-9));
  // dof=2 has the closed form exp(-x/2).
  CHECK(chi_square_survival(4.0, 2) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("complete convergence diagnostic") {
  SuccessCurve always;
  always.eps = 1.0;
  always.horizon = 4;
  always.runs = 50;
  always.successes.assign(5, 50);
  for (auto s : always.successes) always.ci.push_back(wilson_interval(s, 50));
  const auto d = complete_convergence_diagnostic(always, 0.25);
  CHECK(d.reference == 3.0);
  for (double s : d.partial_sums) CHECK(s == 0.0);
  CHECK(d.dominated);
  CHECK(std::isinf(complete_convergence_diagnostic(always, 0.0).reference));

  SuccessCurve never = always;
  never.successes.assign(5, 0);
  never.ci.clear();
  for (auto s : never.successes) never.ci.push_back(wilson_interval(s, 50));
  const auto n = complete_convergence_diagnostic(never, 0.5);
  CHECK(n.partial_sums == std::vector<double>{0, 1, 2, 3, 4});
  CHECK(n.reference == 1.0);
  CHECK_FALSE(n.dominated);

  // HC on l=2: failure at t is 0.75^(t+1) from a uniform start, sum over
  // t >= 1 is 2.25 < 3.
  const auto curve = estimate_success_curve(hc2(), uniform(onemax2(), 1), onemax2(), 1.0, 30, 10000, 3);
  const auto hc = complete_convergence_diagnostic(curve, 0.25);
  CHECK(hc.dominated);
  CHECK(hc.partial_sums.back() == doctest::Approx(2.25).epsilon(0.05));
}
