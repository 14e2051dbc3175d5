#pragma once

/// @file kernel.hpp
/// Markov kernels as composable stochastic state transformers.
///
/// A `Kernel` maps a population of arity `input_arity()` to one of arity
/// `output_arity()`. Every kernel can be sampled. Kernels on finite spaces can
/// additionally report their exact transition row, i.e. the full distribution
/// over successor states; the combinators below propagate that capability:
///
///   deterministic(f)  row(x) = {f(x): 1}
///   compose(k2, k1)   row(x) = sum_z row1(x)[z] * row2(z)
///   mix(ks, w)        row(x) = sum_i w_i * row_i(x)
///   join(ks)          row(x) = product of the block rows (independent blocks)
///
/// Kernels are immutable handles and can be shared across threads; all
/// mutable state lives in the caller's `RandomStream`.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sgo/optspace.hpp"
#include "sgo/random.hpp"

namespace sgo {

/// Sparse probability distribution over states; ordered for reproducibility.
using Distribution = std::map<Population, double>;

using SampleFn = std::function<Population(const Population&, RandomStream&)>;
using RowFn = std::function<Distribution(const Population&)>;
using StateMap = std::function<Population(const Population&)>;

namespace detail {
class KernelNode;
}

class Kernel {
 public:
  explicit Kernel(std::shared_ptr<const detail::KernelNode> node);

  std::size_t input_arity() const noexcept;
  std::size_t output_arity() const noexcept;
  const std::string& name() const noexcept;

  Population sample(const Population& x, RandomStream& rng) const;

  bool has_exact() const noexcept;
  /// Exact successor distribution; throws oracle_unavailable when the kernel
  /// has no finite-space realization.
  Distribution exact_row(const Population& x) const;
  double exact_mass(const Population& x, const Population& y) const;

  /// Indented combinator tree, one node per line.
  std::string describe() const;

  const detail::KernelNode& node() const noexcept { return *node_; }

 private:
  std::shared_ptr<const detail::KernelNode> node_;
};

/// Leaf kernel given by a sampler and, optionally, an exact row oracle.
Kernel primitive(std::string name, std::size_t input_arity, std::size_t output_arity, SampleFn sample,
                 std::optional<RowFn> exact = std::nullopt);

/// The indicator kernel 1_f of a total deterministic map.
Kernel deterministic(std::string name, std::size_t input_arity, std::size_t output_arity, StateMap f);
Kernel identity(std::size_t arity);

/// k2 after k1.
Kernel compose(const Kernel& k2, const Kernel& k1);
Kernel mix(std::vector<Kernel> kernels, std::vector<double> weights);
Kernel join(std::vector<Kernel> kernels);

struct MarkovChainTrace {
  std::vector<Population> states;
  /// d(P_t) per state; empty when the problem has no known optimum.
  std::vector<double> gaps;
};

using StateSampler = std::function<Population(RandomStream&)>;

/// Streams: P_0 from derive(0), step t from derive(t + 1).
/// `visit(t, state)` is called for t = 0..steps.
void walk_chain(const Kernel& k, const StateSampler& initial, std::size_t steps, RandomStream& rng,
                const std::function<void(std::size_t, const Population&)>& visit);

MarkovChainTrace iterate_chain(const Kernel& k, const StateSampler& initial, std::size_t steps,
                               RandomStream& rng, const OptimizationProblem* prob = nullptr);

inline constexpr std::size_t kDefaultStateCap = 4096;

/// Dense row-stochastic matrix indexed by enumerated states.
struct TransitionMatrix {
  std::vector<Population> row_states;
  std::vector<Population> col_states;
  std::vector<double> data;  // row-major

  std::size_t rows() const noexcept { return row_states.size(); }
  std::size_t cols() const noexcept { return col_states.size(); }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  std::size_t index_of_col(const Population& s) const;
  std::size_t index_of_row(const Population& s) const;
};

/// Per-row construction runs in parallel when OpenMP is enabled.
TransitionMatrix exact_matrix(const Kernel& k, const SearchSpace& space, std::size_t state_cap = kDefaultStateCap);

/// Row vector times matrix; `dist.size()` must equal `m.rows()` (square m).
std::vector<double> propagate(const std::vector<double>& dist, const TransitionMatrix& m);

TransitionMatrix multiply(const TransitionMatrix& a, const TransitionMatrix& b);

namespace serial {
TransitionMatrix exact_matrix(const Kernel& k, const SearchSpace& space, std::size_t state_cap = kDefaultStateCap);
}

namespace detail {

class KernelNode {
 public:
  KernelNode(std::string name, std::size_t in, std::size_t out) : name_(std::move(name)), in_(in), out_(out) {}
  virtual ~KernelNode() = default;

  const std::string& name() const noexcept { return name_; }
  std::size_t input_arity() const noexcept { return in_; }
  std::size_t output_arity() const noexcept { return out_; }

  virtual Population sample(const Population& x, RandomStream& rng) const = 0;
  virtual bool has_exact() const noexcept = 0;
  virtual Distribution exact_row(const Population& x) const = 0;
  virtual std::vector<Kernel> children() const { return {}; }

 private:
  std::string name_;
  std::size_t in_;
  std::size_t out_;
};

}  // namespace detail

}  // namespace sgo
