#pragma once

// Small helpers shared by the unit tests. Oracles here never call into the
// kernel combinators; they recompute expectations from first principles.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "sgo/kernel.hpp"
#include "sgo/optspace.hpp"

namespace testing {

inline int count_zeros(const sgo::Individual& x) {
  int z = 0;
  for (std::size_t k = 0; k < x.size(); ++k) z += x[k] == 0.0 ? 1 : 0;
  return z;
}

inline sgo::OptimizationProblem onemax(std::size_t len) {
  return {"onemax-min", sgo::SearchSpace::bitstring(len),
          [](const sgo::Individual& x) { return static_cast<double>(count_zeros(x)); }, 0.0};
}

/// f(x) = x[0] on a one-dimensional box; handy for structural tests with chosen f-values.
inline sgo::OptimizationProblem first_coordinate(double lo = -100.0, double hi = 100.0) {
  return {"first-coordinate", sgo::SearchSpace::real_box(1, lo, hi),
          [](const sgo::Individual& x) { return x[0]; }, std::nullopt};
}

inline sgo::Population values(std::initializer_list<double> fs) {
  sgo::Population p;
  for (double f : fs) p.push_back(sgo::Individual({f}));
  return p;
}

inline std::vector<double> firsts(const sgo::Population& p) {
  std::vector<double> out;
  for (const auto& m : p) out.push_back(m[0]);
  return out;
}

inline sgo::Population bits(const std::string& text) { return sgo::bits_population(text); }

inline double total_variation(const sgo::Distribution& a, const sgo::Distribution& b) {
  std::map<sgo::Population, double> diff;
  for (const auto& [y, p] : a) diff[y] += p;
  for (const auto& [y, p] : b) diff[y] -= p;
  double s = 0.0;
  for (const auto& [y, d] : diff) s += std::abs(d);
  return 0.5 * s;
}

inline double max_abs_diff(const sgo::TransitionMatrix& a, const sgo::TransitionMatrix& b) {
  if (a.data.size() != b.data.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

inline sgo::Distribution empirical(const sgo::Kernel& k, const sgo::Population& x, std::size_t samples,
                                   std::uint64_t seed) {
  sgo::RandomStream rng(seed);
  sgo::Distribution d;
  for (std::size_t s = 0; s < samples; ++s) d[k.sample(x, rng)] += 1.0 / static_cast<double>(samples);
  return d;
}

}  // namespace testing
