#include "sgo/operators.hpp"

#include <cmath>

#include "sgo/error.hpp"
#include "sgo/format.hpp"
#include "sgo/structural.hpp"

namespace sgo {

namespace {

constexpr std::size_t kMaxExactMaskBits = 20;

Individual flipped(const Individual& x, std::size_t bit) {
  Individual y = x;
  y[bit] = 1.0 - y[bit];
  return y;
}

}  // namespace

Kernel bit_flip_kernel(std::size_t length, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::invalid_operator, "flip probability must lie in [0, 1]");
  SampleFn sample = [p](const Population& x, RandomStream& rng) {
    Individual y = x[0];
    for (std::size_t k = 0; k < y.size(); ++k) {
      if (rng.bernoulli(p)) y[k] = 1.0 - y[k];
    }
    return Population{std::move(y)};
  };
  std::optional<RowFn> exact;
  if (length <= kMaxExactMaskBits) {
    exact = [p](const Population& x) {
      const std::size_t len = x[0].size();
      Distribution row;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
        Individual y = x[0];
        double mass = 1.0;
        for (std::size_t k = 0; k < len; ++k) {
          const bool flip = ((mask >> k) & 1U) != 0;
          if (flip) y[k] = 1.0 - y[k];
          mass *= flip ? p : 1.0 - p;
        }
        if (mass > 0.0) row[Population{std::move(y)}] += mass;
      }
      return row;
    };
  }
  return primitive("bit-flip(p=" + shortest(p) + ")", 1, 1, std::move(sample), std::move(exact));
}

Kernel single_bit_flip_kernel(std::size_t length) {
  if (length == 0) throw Error(ErrorCode::invalid_operator, "single-bit flip needs l >= 1");
  std::vector<Kernel> flips;
  flips.reserve(length);
  for (std::size_t k = 0; k < length; ++k) {
    flips.push_back(deterministic("flip-bit-" + std::to_string(k + 1), 1, 1,
                                  [k](const Population& x) { return Population{flipped(x[0], k)}; }));
  }
  return mix(std::move(flips), std::vector<double>(length, 1.0 / static_cast<double>(length)));
}

Kernel gaussian_step_kernel(const SearchSpace& space, double sigma) {
  if (space.is_bitstring()) throw Error(ErrorCode::invalid_space, "gaussian step needs a real box");
  if (!(sigma > 0.0)) throw Error(ErrorCode::invalid_operator, "sigma must be > 0");
  return primitive("gaussian-step(sigma=" + shortest(sigma) + ")", 1, 1,
                   [space, sigma](const Population& x, RandomStream& rng) {
                     Individual y = x[0];
                     for (std::size_t k = 0; k < y.size(); ++k) y[k] += sigma * rng.gaussian();
                     return Population{clamp_to_space(std::move(y), space)};
                   });
}

Kernel single_point_crossover_kernel(std::size_t length) {
  if (length == 0) throw Error(ErrorCode::invalid_operator, "crossover needs l >= 1");
  if (length == 1) return identity(2);
  std::vector<Kernel> cuts;
  for (std::size_t cut = 1; cut < length; ++cut) {
    cuts.push_back(deterministic("cut-at-" + std::to_string(cut), 2, 2, [cut](const Population& z) {
      Individual a = z[0];
      Individual b = z[1];
      for (std::size_t k = cut; k < a.size(); ++k) std::swap(a[k], b[k]);
      return Population{std::move(a), std::move(b)};
    }));
  }
  const double w = 1.0 / static_cast<double>(cuts.size());
  return mix(std::move(cuts), std::vector<double>(length - 1, w));
}

Kernel uniform_crossover_kernel(std::size_t dimension) {
  SampleFn sample = [](const Population& z, RandomStream& rng) {
    Individual a = z[0];
    Individual b = z[1];
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (rng.bernoulli(0.5)) std::swap(a[k], b[k]);
    }
    return Population{std::move(a), std::move(b)};
  };
  std::optional<RowFn> exact;
  if (dimension <= kMaxExactMaskBits) {
    exact = [](const Population& z) {
      const std::size_t d = z[0].size();
      const double w = std::ldexp(1.0, -static_cast<int>(d));
      Distribution row;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
        Individual a = z[0];
        Individual b = z[1];
        for (std::size_t k = 0; k < d; ++k) {
          if ((mask >> k) & 1U) std::swap(a[k], b[k]);
        }
        row[Population{std::move(a), std::move(b)}] += w;
      }
      return row;
    };
  }
  return primitive("uniform-crossover", 2, 2, std::move(sample), std::move(exact));
}

Kernel pairwise(const Kernel& single) {
  if (single.input_arity() != 1 || single.output_arity() != 1) {
    throw Error(ErrorCode::invalid_operator, "pairwise application needs a 1 -> 1 kernel");
  }
  return join({compose(single, projection_kernel(IndexSet({1}, 2))),
               compose(single, projection_kernel(IndexSet({2}, 2)))});
}

double effective_flip_prob(const SearchSpace& space, const OperatorParams& params) {
  return params.flip_prob.value_or(1.0 / static_cast<double>(space.dimension()));
}

VariationOperator make_variate(const SearchSpace& space, const OperatorParams& params) {
  if (!space.is_bitstring()) return {"gaussian-step", gaussian_step_kernel(space, params.sigma)};
  if (params.single_flip) return {"single-bit-flip", single_bit_flip_kernel(space.dimension())};
  return {"bit-flip", bit_flip_kernel(space.dimension(), effective_flip_prob(space, params))};
}

VariationOperator make_mutation(const SearchSpace& space, const OperatorParams& params) {
  if (!space.is_bitstring()) return {"gaussian-step", gaussian_step_kernel(space, params.sigma)};
  return {"bit-flip", bit_flip_kernel(space.dimension(), effective_flip_prob(space, params))};
}

VariationOperator make_crossover(const SearchSpace& space) {
  if (space.is_bitstring()) return {"single-point", single_point_crossover_kernel(space.dimension())};
  return {"uniform", uniform_crossover_kernel(space.dimension())};
}

}  // namespace sgo
