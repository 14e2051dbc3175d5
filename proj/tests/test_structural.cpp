#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "sgo/error.hpp"
#include "sgo/random.hpp"
#include "sgo/structural.hpp"
#include "support.hpp"

using namespace sgo;
using testing::firsts;
using testing::values;

namespace {

Population run(const Kernel& k, const Population& x, std::uint64_t seed = 0) {
  RandomStream rng(seed);
  return k.sample(x, rng);
}

// Letters as distinct one-gene individuals: a=1, b=2, ...
Population letters(std::size_t n) {
  Population p;
  for (std::size_t i = 0; i < n; ++i) p.push_back(Individual({double(i + 1)}));
  return p;
}

}  // namespace

TEST_CASE("index sets") {
  CHECK(IndexSet({2, 3}, 4).size() == 2);
  CHECK(IndexSet::range(5, 6, 6).indices() == std::vector<std::size_t>{5, 6});
  CHECK_THROWS_AS(IndexSet({0}, 2), Error);
  CHECK_THROWS_AS(IndexSet({3}, 2), Error);
  CHECK_THROWS_AS(IndexSet({2, 1}, 2), Error);
  CHECK_THROWS_AS(IndexSet({1, 1}, 2), Error);
}

TEST_CASE("swap") {
  CHECK(run(swap_kernel(), values({1, 2})) == values({2, 1}));
  CHECK(swap_kernel().exact_mass(testing::bits("0,1"), testing::bits("1,0")) == 1.0);
  const auto space = SearchSpace::bitstring(2);
  CHECK(testing::max_abs_diff(exact_matrix(compose(swap_kernel(), swap_kernel()), space),
                              exact_matrix(identity(2), space)) == 0.0);
}

TEST_CASE("projections") {
  CHECK(run(projection_kernel(IndexSet({2, 3}, 4)), letters(4)) == values({2, 3}));
  CHECK(run(projection_kernel(IndexSet::range(1, 3, 3)), letters(3)) == letters(3));
  CHECK(run(projection_kernel(IndexSet({1}, 2)), letters(2)) == values({1}));
}

TEST_CASE("fixed permutations") {
  const auto space = SearchSpace::bitstring(1);
  CHECK(testing::max_abs_diff(exact_matrix(permutation_kernel(Permutation({2, 1})), space),
                              exact_matrix(swap_kernel(), space)) == 0.0);
  CHECK(testing::max_abs_diff(exact_matrix(permutation_kernel(Permutation({1, 2, 3})), space),
                              exact_matrix(identity(3), space)) == 0.0);
  CHECK(run(permutation_kernel(Permutation({3, 1, 2})), letters(3)) == values({3, 1, 2}));
  CHECK_THROWS_AS(Permutation({1, 1}), Error);
  CHECK_THROWS_AS(Permutation({1, 3}), Error);

  const Permutation p({3, 1, 4, 2});
  const auto round = compose(permutation_kernel(p), permutation_kernel(p.inverse()));
  CHECK(testing::max_abs_diff(exact_matrix(round, space), exact_matrix(identity(4), space)) == 0.0);
}

TEST_CASE("random scan permutation") {
  CHECK(run(random_scan_permutation(1), letters(1)) == letters(1));

  const auto k = random_scan_permutation(3);
  RandomStream rng(123);
  std::map<std::vector<double>, int> seen;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto y = k.sample(letters(3), rng);
    auto sorted = firsts(y);
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<double>{1, 2, 3});
    ++seen[firsts(y)];
  }
  CHECK(seen.size() == 6);
  for (const auto& [order, count] : seen) CHECK(std::abs(count / double(n) - 1.0 / 6.0) < 0.01);

  // Exact mass: 1/n! per arrangement of distinct members.
  const auto row = random_scan_permutation(4).exact_row(letters(4));
  CHECK(row.size() == 24);
  for (const auto& [y, p] : row) CHECK(p == doctest::Approx(1.0 / 24.0).epsilon(1e-12));
}

TEST_CASE("sort two") {
  const auto prob = testing::first_coordinate();
  const auto s2 = sort_two_kernel(prob);
  CHECK(run(s2, values({1, 2})) == values({1, 2}));
  CHECK(firsts(run(s2, values({2, 1}))) == std::vector<double>{1, 2});

  // Ties swap: distinguish the two members by a second gene.
  const Population tie{Individual({1.0, 10.0}), Individual({1.0, 20.0})};
  const auto out = run(s2, tie);
  CHECK(out[0][1] == 20.0);
  CHECK(out[1][1] == 10.0);
}

TEST_CASE("bubble passes") {
  const auto prob = testing::first_coordinate();
  CHECK(firsts(run(bubble_pass_kernel(3, 1, prob), values({2, 1, 0}))) == std::vector<double>{1, 2, 0});
  CHECK(firsts(run(bubble_pass_kernel(3, 2, prob), values({2, 1, 0}))) == std::vector<double>{2, 0, 1});
  CHECK_THROWS_AS(bubble_pass_kernel(3, 3, prob), Error);
  CHECK_THROWS_AS(bubble_pass_kernel(3, 0, prob), Error);

  RandomStream rng(4);
  const auto w = bubble_pass_kernel(4, 2, prob);
  for (int i = 0; i < 200; ++i) {
    Population p;
    for (int k = 0; k < 4; ++k) p.push_back(Individual({double(rng.uniform_index(0, 5))}));
    const auto once = run(w, p);
    CHECK(firsts(run(w, once)) == firsts(once));
  }
}

TEST_CASE("full sort") {
  const auto prob = testing::first_coordinate();
  CHECK(firsts(run(full_sort_kernel(3, prob), values({3, 2, 1}))) == std::vector<double>{1, 2, 3});
  CHECK(run(full_sort_kernel(4, prob), values({1, 2, 3, 4})) == values({1, 2, 3, 4}));
  CHECK(firsts(run(full_sort_kernel(3, prob), values({2, 3, 1}))) == std::vector<double>{1, 2, 3});

  RandomStream rng(77);
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto k = full_sort_kernel(n, prob);
    for (int trial = 0; trial < 200; ++trial) {
      Population p;
      for (std::size_t i = 0; i < n; ++i) p.push_back(Individual({double(rng.uniform_index(0, 9)), double(i)}));
      const auto out = run(k, p);
      auto expected = p.members();
      std::sort(expected.begin(), expected.end());
      auto got = out.members();
      std::sort(got.begin(), got.end());
      CHECK(got == expected);
      auto fs = firsts(out);
      CHECK(std::is_sorted(fs.begin(), fs.end()));
    }
  }
}

TEST_CASE("best two of four") {
  const auto prob = testing::first_coordinate();
  const auto b24 = best_two_of_four_kernel(prob);
  CHECK(b24.input_arity() == 4);
  CHECK(b24.output_arity() == 2);

  auto pair_values = [&](const Population& in) {
    auto fs = firsts(run(b24, in));
    std::sort(fs.begin(), fs.end());
    return fs;
  };
  CHECK(pair_values(values({4, 3, 2, 1})) == std::vector<double>{1, 2});
  CHECK(pair_values(values({1, 1, 5, 5})) == std::vector<double>{1, 1});
  CHECK(pair_values(values({5, 5, 1, 1})) == std::vector<double>{1, 1});

  std::vector<double> perm{1, 2, 3, 4};
  int cases = 0;
  do {
    CHECK(pair_values(values({perm[0], perm[1], perm[2], perm[3]})) == std::vector<double>{1, 2});
    ++cases;
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(cases == 24);
}

TEST_CASE("structural kernels are 0/1 valued except random scan") {
  const auto prob = testing::onemax(1);
  const auto space = prob.space();
  for (const auto& k : {full_sort_kernel(3, prob), bubble_sweep_kernel(3, 2, prob), swap_kernel(),
                        permutation_kernel(Permutation({2, 3, 1}))}) {
    for (double v : exact_matrix(k, space).data) CHECK((v == 0.0 || v == 1.0));
  }
}
