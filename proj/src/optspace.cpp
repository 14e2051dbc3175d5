#include "sgo/optspace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "sgo/error.hpp"
#include "sgo/random.hpp"

namespace sgo {

SearchSpace::SearchSpace(SpaceKind kind, std::size_t dimension, std::vector<Bounds> bounds)
    : kind_(kind), dimension_(dimension), bounds_(std::move(bounds)) {
  if (dimension_ == 0) throw Error(ErrorCode::invalid_argument, "search space dimension must be >= 1");
  for (const auto& b : bounds_) {
    if (!(b.lo < b.hi)) throw Error(ErrorCode::invalid_argument, "box bounds require lo < hi");
  }
}

SearchSpace SearchSpace::bitstring(std::size_t length) {
  return SearchSpace(SpaceKind::bitstring, length, {});
}

SearchSpace SearchSpace::real_box(std::vector<Bounds> bounds) {
  const auto d = bounds.size();
  return SearchSpace(SpaceKind::real_box, d, std::move(bounds));
}

SearchSpace SearchSpace::real_box(std::size_t dimension, double lo, double hi) {
  return real_box(std::vector<Bounds>(dimension, Bounds{lo, hi}));
}

Individual Individual::from_bits(std::string_view bits) {
  std::vector<double> genes;
  genes.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw Error(ErrorCode::invalid_argument, "bitstring must contain only 0/1");
    genes.push_back(c == '1' ? 1.0 : 0.0);
  }
  return Individual(std::move(genes));
}

std::string Individual::to_string(bool as_bits) const {
  std::string out;
  if (as_bits) {
    for (double g : genes_) out.push_back(g != 0.0 ? '1' : '0');
    return out;
  }
  out.push_back('(');
  char buf[32];
  for (std::size_t i = 0; i < genes_.size(); ++i) {
    if (i > 0) out += ", ";
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, genes_[i]);
    out.append(buf, ptr);
  }
  out.push_back(')');
  return out;
}

void Population::append(const Population& other) {
  members_.insert(members_.end(), other.members_.begin(), other.members_.end());
}

std::string Population::to_string(bool as_bits) const {
  std::string out;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i > 0) out += as_bits ? "," : " ";
    out += members_[i].to_string(as_bits);
  }
  return out;
}

Population bits_population(std::string_view text) {
  Population pop;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    pop.push_back(Individual::from_bits(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return pop;
}

OptimizationProblem::OptimizationProblem(std::string id, SearchSpace space, Objective objective,
                                         std::optional<double> optimum_value)
    : id_(std::move(id)),
      space_(std::move(space)),
      objective_(std::make_shared<const Objective>(std::move(objective))),
      optimum_(optimum_value) {
  if (!*objective_) throw Error(ErrorCode::invalid_argument, "objective must be callable");
}

double OptimizationProblem::evaluate(const Individual& x) const {
  const double v = (*objective_)(x);
  if (optimum_ && v < *optimum_) {
    throw Error(ErrorCode::invalid_argument,
                "objective of " + id_ + " scored below its declared optimum");
  }
  return v;
}

std::string_view to_string(EpsClass c) noexcept {
  switch (c) {
    case EpsClass::strict_optimal: return "strict-optimal";
    case EpsClass::boundary: return "boundary";
    case EpsClass::outside: return "outside";
  }
  return "?";
}

std::size_t best_index(const Population& pop, const OptimizationProblem& prob) {
  if (pop.size() == 0) throw Error(ErrorCode::invalid_argument, "best_index of empty population");
  std::size_t best = 0;
  double best_f = prob.evaluate(pop[0]);
  for (std::size_t i = 1; i < pop.size(); ++i) {
    const double f = prob.evaluate(pop[i]);
    if (f < best_f) {
      best = i;
      best_f = f;
    }
  }
  return best;
}

double best_value(const Population& pop, const OptimizationProblem& prob) {
  return prob.evaluate(pop[best_index(pop, prob)]);
}

double optimality_gap(const Population& pop, const OptimizationProblem& prob) {
  if (!prob.optimum_value()) {
    throw Error(ErrorCode::gap_unavailable, "problem " + prob.id() + " has no known optimum");
  }
  return best_value(pop, prob) - *prob.optimum_value();
}

EpsClass classify_gap(double gap, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "eps must be > 0");
  if (gap < eps) return EpsClass::strict_optimal;
  if (gap == eps) return EpsClass::boundary;
  return EpsClass::outside;
}

EpsClass classify_eps(const Population& pop, const OptimizationProblem& prob, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "eps must be > 0");
  return classify_gap(optimality_gap(pop, prob), eps);
}

bool in_eps_set(const Population& pop, const OptimizationProblem& prob, double eps) {
  return classify_eps(pop, prob, eps) == EpsClass::strict_optimal;
}

std::vector<Population> enumerate_states(const SearchSpace& space, std::size_t n,
                                         std::size_t max_total_bits) {
  if (!space.is_bitstring()) {
    throw Error(ErrorCode::enumeration_too_large, "only bitstring spaces are enumerable");
  }
  if (n == 0) throw Error(ErrorCode::invalid_argument, "population size must be >= 1");
  const std::size_t len = space.dimension();
  const std::size_t total = len * n;
  if (total > max_total_bits || total >= 63) {
    throw Error(ErrorCode::enumeration_too_large,
                std::to_string(total) + " total bits exceeds the cap of " + std::to_string(max_total_bits));
  }
  const std::uint64_t count = std::uint64_t{1} << total;
  std::vector<Population> states;
  states.reserve(count);
  for (std::uint64_t code = 0; code < count; ++code) {
    std::vector<Individual> members;
    members.reserve(n);
    for (std::size_t m = 0; m < n; ++m) {
      std::vector<double> genes(len);
      for (std::size_t j = 0; j < len; ++j) {
        const std::size_t pos = m * len + j;
        genes[j] = static_cast<double>((code >> (total - 1 - pos)) & 1U);
      }
      members.emplace_back(std::move(genes));
    }
    states.emplace_back(std::move(members));
  }
  return states;
}

Individual random_individual(const SearchSpace& space, RandomStream& rng) {
  std::vector<double> genes(space.dimension());
  if (space.is_bitstring()) {
    for (auto& g : genes) g = rng.bernoulli(0.5) ? 1.0 : 0.0;
  } else {
    for (std::size_t k = 0; k < genes.size(); ++k) {
      const auto& b = space.bounds()[k];
      genes[k] = b.lo + (b.hi - b.lo) * rng.uniform();
    }
  }
  return Individual(std::move(genes));
}

Population random_population(const SearchSpace& space, std::size_t n, RandomStream& rng) {
  Population pop;
  for (std::size_t i = 0; i < n; ++i) pop.push_back(random_individual(space, rng));
  return pop;
}

Individual clamp_to_space(Individual x, const SearchSpace& space) {
  if (space.is_bitstring()) return x;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto& b = space.bounds()[k];
    x[k] = std::clamp(x[k], b.lo, b.hi);
  }
  return x;
}

bool contains(const SearchSpace& space, const Individual& x) {
  if (x.size() != space.dimension()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (space.is_bitstring()) {
      if (x[k] != 0.0 && x[k] != 1.0) return false;
    } else {
      const auto& b = space.bounds()[k];
      if (!(x[k] >= b.lo && x[k] <= b.hi)) return false;
    }
  }
  return true;
}

}  // namespace sgo
