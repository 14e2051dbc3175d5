#include "sgo/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sgo/error.hpp"

namespace sgo {

namespace {

using detail::KernelNode;

class PrimitiveNode final : public KernelNode {
 public:
  PrimitiveNode(std::string name, std::size_t in, std::size_t out, SampleFn sample, std::optional<RowFn> exact)
      : KernelNode(std::move(name), in, out), sample_(std::move(sample)), exact_(std::move(exact)) {}

  Population sample(const Population& x, RandomStream& rng) const override { return sample_(x, rng); }
  bool has_exact() const noexcept override { return exact_.has_value(); }
  Distribution exact_row(const Population& x) const override {
    if (!exact_) throw Error(ErrorCode::oracle_unavailable, "kernel '" + name() + "' has no exact transition row");
    return (*exact_)(x);
  }

 private:
  SampleFn sample_;
  std::optional<RowFn> exact_;
};

class DeterministicNode final : public KernelNode {
 public:
  DeterministicNode(std::string name, std::size_t in, std::size_t out, StateMap f)
      : KernelNode(std::move(name), in, out), f_(std::move(f)) {}

  Population sample(const Population& x, RandomStream&) const override { return f_(x); }
  bool has_exact() const noexcept override { return true; }
  Distribution exact_row(const Population& x) const override { return Distribution{{f_(x), 1.0}}; }

 private:
  StateMap f_;
};

class ComposeNode final : public KernelNode {
 public:
  ComposeNode(Kernel second, Kernel first)
      : KernelNode("compose", first.input_arity(), second.output_arity()),
        second_(std::move(second)),
        first_(std::move(first)) {}

  Population sample(const Population& x, RandomStream& rng) const override {
    RandomStream s1 = rng.derive(0);
    RandomStream s2 = rng.derive(1);
    return second_.sample(first_.sample(x, s1), s2);
  }
  bool has_exact() const noexcept override { return first_.has_exact() && second_.has_exact(); }
  Distribution exact_row(const Population& x) const override {
    Distribution out;
    for (const auto& [mid, p] : first_.exact_row(x)) {
      if (p == 0.0) continue;
      for (const auto& [y, q] : second_.exact_row(mid)) out[y] += p * q;
    }
    return out;
  }
  std::vector<Kernel> children() const override { return {second_, first_}; }

 private:
  Kernel second_;
  Kernel first_;
};

class MixNode final : public KernelNode {
 public:
  MixNode(std::vector<Kernel> kernels, std::vector<double> weights)
      : KernelNode("mix", kernels.front().input_arity(), kernels.front().output_arity()),
        kernels_(std::move(kernels)),
        weights_(std::move(weights)) {}

  Population sample(const Population& x, RandomStream& rng) const override {
    // Index first; only the chosen component consumes randomness.
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t pick = kernels_.size() - 1;
    for (std::size_t i = 0; i < kernels_.size(); ++i) {
      acc += weights_[i];
      if (u < acc && weights_[i] > 0.0) {
        pick = i;
        break;
      }
    }
    while (weights_[pick] == 0.0 && pick > 0) --pick;
    return kernels_[pick].sample(x, rng);
  }
  bool has_exact() const noexcept override {
    return std::all_of(kernels_.begin(), kernels_.end(), [](const Kernel& k) { return k.has_exact(); });
  }
  Distribution exact_row(const Population& x) const override {
    Distribution out;
    for (std::size_t i = 0; i < kernels_.size(); ++i) {
      if (weights_[i] == 0.0) continue;
      for (const auto& [y, q] : kernels_[i].exact_row(x)) out[y] += weights_[i] * q;
    }
    return out;
  }
  std::vector<Kernel> children() const override { return kernels_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<Kernel> kernels_;
  std::vector<double> weights_;
};

std::size_t sum_output_arity(const std::vector<Kernel>& ks) {
  std::size_t total = 0;
  for (const auto& k : ks) total += k.output_arity();
  return total;
}

class JoinNode final : public KernelNode {
 public:
  explicit JoinNode(std::vector<Kernel> kernels)
      : KernelNode("join", kernels.front().input_arity(), sum_output_arity(kernels)), kernels_(std::move(kernels)) {}

  Population sample(const Population& x, RandomStream& rng) const override {
    Population out;
    for (std::size_t i = 0; i < kernels_.size(); ++i) {
      RandomStream child = rng.derive(i);
      out.append(kernels_[i].sample(x, child));
    }
    return out;
  }
  bool has_exact() const noexcept override {
    return std::all_of(kernels_.begin(), kernels_.end(), [](const Kernel& k) { return k.has_exact(); });
  }
  Distribution exact_row(const Population& x) const override {
    Distribution acc{{Population{}, 1.0}};
    for (const auto& k : kernels_) {
      const Distribution block = k.exact_row(x);
      Distribution next;
      for (const auto& [prefix, p] : acc) {
        for (const auto& [tail, q] : block) {
          Population joined = prefix;
          joined.append(tail);
          next[std::move(joined)] += p * q;
        }
      }
      acc = std::move(next);
    }
    return acc;
  }
  std::vector<Kernel> children() const override { return kernels_; }

 private:
  std::vector<Kernel> kernels_;
};

void describe_into(const Kernel& k, int depth, std::ostringstream& os) {
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << k.name() << " [" << k.input_arity() << "->"
     << k.output_arity() << "]";
  if (const auto* m = dynamic_cast<const MixNode*>(&k.node())) {
    os << " weights=(";
    for (std::size_t i = 0; i < m->weights().size(); ++i) os << (i ? "," : "") << m->weights()[i];
    os << ")";
  }
  os << '\n';
  for (const auto& child : k.node().children()) describe_into(child, depth + 1, os);
}

std::size_t checked_state_count(const SearchSpace& space, std::size_t arity, std::size_t state_cap) {
  if (!space.is_bitstring()) {
    throw Error(ErrorCode::enumeration_too_large, "exact matrices need a finite bitstring space");
  }
  const std::size_t bits = space.dimension() * arity;
  if (bits >= 63 || (std::size_t{1} << bits) > state_cap) {
    throw Error(ErrorCode::enumeration_too_large,
                "2^" + std::to_string(bits) + " states exceed the cap of " + std::to_string(state_cap));
  }
  return bits;
}

TransitionMatrix prepare_matrix(const Kernel& k, const SearchSpace& space, std::size_t state_cap) {
  if (!k.has_exact()) throw Error(ErrorCode::oracle_unavailable, "kernel '" + k.name() + "' has no exact rows");
  TransitionMatrix m;
  m.row_states = enumerate_states(space, k.input_arity(), checked_state_count(space, k.input_arity(), state_cap));
  m.col_states = enumerate_states(space, k.output_arity(), checked_state_count(space, k.output_arity(), state_cap));
  m.data.assign(m.rows() * m.cols(), 0.0);
  return m;
}

void fill_row(const Kernel& k, TransitionMatrix& m, std::size_t r) {
  for (const auto& [y, p] : k.exact_row(m.row_states[r])) m(r, m.index_of_col(y)) += p;
}

std::size_t index_in(const std::vector<Population>& states, const Population& s) {
  auto it = std::lower_bound(states.begin(), states.end(), s);
  if (it == states.end() || *it != s) {
    throw Error(ErrorCode::invalid_argument, "state is not part of the enumerated space");
  }
  return static_cast<std::size_t>(it - states.begin());
}

}  // namespace

Kernel::Kernel(std::shared_ptr<const detail::KernelNode> node) : node_(std::move(node)) {
  if (!node_) throw Error(ErrorCode::invalid_argument, "null kernel");
}

std::size_t Kernel::input_arity() const noexcept { return node_->input_arity(); }
std::size_t Kernel::output_arity() const noexcept { return node_->output_arity(); }
const std::string& Kernel::name() const noexcept { return node_->name(); }

Population Kernel::sample(const Population& x, RandomStream& rng) const {
  if (x.size() != input_arity()) {
    throw Error(ErrorCode::invalid_argument, "kernel '" + name() + "' expects arity " + std::to_string(input_arity()) +
                                                 ", got " + std::to_string(x.size()));
  }
  return node_->sample(x, rng);
}

bool Kernel::has_exact() const noexcept { return node_->has_exact(); }

Distribution Kernel::exact_row(const Population& x) const {
  if (x.size() != input_arity()) {
    throw Error(ErrorCode::invalid_argument, "kernel '" + name() + "' expects arity " + std::to_string(input_arity()));
  }
  return node_->exact_row(x);
}

double Kernel::exact_mass(const Population& x, const Population& y) const {
  const Distribution row = exact_row(x);
  auto it = row.find(y);
  return it == row.end() ? 0.0 : it->second;
}

std::string Kernel::describe() const {
  std::ostringstream os;
  describe_into(*this, 0, os);
  return os.str();
}

Kernel primitive(std::string name, std::size_t input_arity, std::size_t output_arity, SampleFn sample,
                 std::optional<RowFn> exact) {
  return Kernel(std::make_shared<PrimitiveNode>(std::move(name), input_arity, output_arity, std::move(sample),
                                                std::move(exact)));
}

Kernel deterministic(std::string name, std::size_t input_arity, std::size_t output_arity, StateMap f) {
  return Kernel(std::make_shared<DeterministicNode>(std::move(name), input_arity, output_arity, std::move(f)));
}

Kernel identity(std::size_t arity) {
  return deterministic("identity", arity, arity, [](const Population& x) { return x; });
}

Kernel compose(const Kernel& k2, const Kernel& k1) {
  if (k1.output_arity() != k2.input_arity()) {
    throw Error(ErrorCode::invalid_composition, "cannot feed arity " + std::to_string(k1.output_arity()) +
                                                    " into a kernel of input arity " + std::to_string(k2.input_arity()));
  }
  return Kernel(std::make_shared<ComposeNode>(k2, k1));
}

Kernel mix(std::vector<Kernel> kernels, std::vector<double> weights) {
  if (kernels.empty()) throw Error(ErrorCode::invalid_argument, "mix of an empty kernel list");
  if (kernels.size() != weights.size()) throw Error(ErrorCode::invalid_weights, "one weight per kernel required");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::invalid_weights, "weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::invalid_weights, "weights must sum to 1");
  for (const auto& k : kernels) {
    if (k.input_arity() != kernels.front().input_arity() || k.output_arity() != kernels.front().output_arity()) {
      throw Error(ErrorCode::invalid_argument, "mixed kernels must share arities");
    }
  }
  return Kernel(std::make_shared<MixNode>(std::move(kernels), std::move(weights)));
}

Kernel join(std::vector<Kernel> kernels) {
  if (kernels.empty()) throw Error(ErrorCode::invalid_join, "join of an empty kernel list");
  for (const auto& k : kernels) {
    if (k.input_arity() != kernels.front().input_arity()) {
      throw Error(ErrorCode::invalid_join, "joined kernels must share the input arity");
    }
  }
  return Kernel(std::make_shared<JoinNode>(std::move(kernels)));
}

void walk_chain(const Kernel& k, const StateSampler& initial, std::size_t steps, RandomStream& rng,
                const std::function<void(std::size_t, const Population&)>& visit) {
  if (k.input_arity() != k.output_arity()) {
    throw Error(ErrorCode::invalid_chain, "chain iteration needs a square kernel");
  }
  RandomStream s0 = rng.derive(0);
  Population state = initial(s0);
  visit(0, state);
  for (std::size_t t = 1; t <= steps; ++t) {
    RandomStream st = rng.derive(t);
    state = k.sample(state, st);
    visit(t, state);
  }
}

MarkovChainTrace iterate_chain(const Kernel& k, const StateSampler& initial, std::size_t steps, RandomStream& rng,
                               const OptimizationProblem* prob) {
  MarkovChainTrace trace;
  trace.states.reserve(steps + 1);
  const bool with_gaps = prob != nullptr && prob->optimum_value().has_value();
  walk_chain(k, initial, steps, rng, [&](std::size_t, const Population& p) {
    trace.states.push_back(p);
    if (with_gaps) trace.gaps.push_back(optimality_gap(p, *prob));
  });
  return trace;
}

std::size_t TransitionMatrix::index_of_col(const Population& s) const { return index_in(col_states, s); }
std::size_t TransitionMatrix::index_of_row(const Population& s) const { return index_in(row_states, s); }

TransitionMatrix exact_matrix(const Kernel& k, const SearchSpace& space, std::size_t state_cap) {
  TransitionMatrix m = prepare_matrix(k, space, state_cap);
  const auto rows = static_cast<std::ptrdiff_t>(m.rows());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < rows; ++r) fill_row(k, m, static_cast<std::size_t>(r));
  return m;
}

namespace serial {
TransitionMatrix exact_matrix(const Kernel& k, const SearchSpace& space, std::size_t state_cap) {
  TransitionMatrix m = prepare_matrix(k, space, state_cap);
  for (std::size_t r = 0; r < m.rows(); ++r) fill_row(k, m, r);
  return m;
}
}  // namespace serial

std::vector<double> propagate(const std::vector<double>& dist, const TransitionMatrix& m) {
  if (dist.size() != m.rows()) throw Error(ErrorCode::invalid_argument, "distribution length mismatch");
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (dist[r] == 0.0) continue;
    for (std::size_t c = 0; c < m.cols(); ++c) out[c] += dist[r] * m(r, c);
  }
  return out;
}

TransitionMatrix multiply(const TransitionMatrix& a, const TransitionMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::invalid_argument, "matrix shapes do not chain");
  TransitionMatrix out;
  out.row_states = a.row_states;
  out.col_states = b.col_states;
  out.data.assign(out.rows() * out.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double v = a(i, k);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += v * b(k, j);
    }
  }
  return out;
}

}  // namespace sgo
