#pragma once

/// @file optspace.hpp
/// Search spaces, individuals, populations and optimization problems.
///
/// Everything here is minimization-only. Bitstring individuals store their
/// bits as the reals 0.0 and 1.0 so that one `Individual` type serves both
/// kinds of search space; the owning `SearchSpace` says how to read them.

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sgo {

class RandomStream;

enum class SpaceKind { real_box, bitstring };

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;
  bool operator==(const Bounds&) const = default;
};

class SearchSpace {
 public:
  static SearchSpace bitstring(std::size_t length);
  static SearchSpace real_box(std::vector<Bounds> bounds);
  static SearchSpace real_box(std::size_t dimension, double lo, double hi);

  SpaceKind kind() const noexcept { return kind_; }
  bool is_bitstring() const noexcept { return kind_ == SpaceKind::bitstring; }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<Bounds>& bounds() const noexcept { return bounds_; }

  bool operator==(const SearchSpace&) const = default;

 private:
  SearchSpace(SpaceKind kind, std::size_t dimension, std::vector<Bounds> bounds);

  SpaceKind kind_;
  std::size_t dimension_;
  std::vector<Bounds> bounds_;
};

class Individual {
 public:
  Individual() = default;
  explicit Individual(std::vector<double> genes) : genes_(std::move(genes)) {}

  /// Parses "0110" into a bitstring individual.
  static Individual from_bits(std::string_view bits);

  std::size_t size() const noexcept { return genes_.size(); }
  double operator[](std::size_t i) const { return genes_[i]; }
  double& operator[](std::size_t i) { return genes_[i]; }
  std::span<const double> genes() const noexcept { return genes_; }
  std::vector<double>& mutable_genes() noexcept { return genes_; }

  /// "0110" for bitstrings; "(x1, x2, ...)" otherwise.
  std::string to_string(bool as_bits) const;

  auto operator<=>(const Individual&) const = default;
  bool operator==(const Individual&) const = default;

 private:
  std::vector<double> genes_;
};

/// An ordered, fixed-length tuple of individuals: one state of the chain.
class Population {
 public:
  Population() = default;
  explicit Population(std::vector<Individual> members) : members_(std::move(members)) {}
  Population(std::initializer_list<Individual> members) : members_(members) {}

  std::size_t size() const noexcept { return members_.size(); }
  const Individual& operator[](std::size_t i) const { return members_[i]; }
  Individual& operator[](std::size_t i) { return members_[i]; }
  const std::vector<Individual>& members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  void append(const Population& other);
  void push_back(Individual ind) { members_.push_back(std::move(ind)); }

  std::string to_string(bool as_bits) const;

  auto operator<=>(const Population&) const = default;
  bool operator==(const Population&) const = default;

 private:
  std::vector<Individual> members_;
};

/// Parses "01" or "01,10" (comma-separated members) into a bitstring population.
Population bits_population(std::string_view text);

using Objective = std::function<double(const Individual&)>;

class OptimizationProblem {
 public:
  OptimizationProblem(std::string id, SearchSpace space, Objective objective,
                      std::optional<double> optimum_value = std::nullopt);

  const std::string& id() const noexcept { return id_; }
  const SearchSpace& space() const noexcept { return space_; }
  const std::optional<double>& optimum_value() const noexcept { return optimum_; }

  /// Evaluates f. Throws if the value lies strictly below the declared optimum.
  double evaluate(const Individual& x) const;

 private:
  std::string id_;
  SearchSpace space_;
  std::shared_ptr<const Objective> objective_;
  std::optional<double> optimum_;
};

enum class EpsClass { strict_optimal, boundary, outside };

std::string_view to_string(EpsClass c) noexcept;

/// Index of the earliest member attaining the minimum objective value (0-based).
std::size_t best_index(const Population& pop, const OptimizationProblem& prob);
double best_value(const Population& pop, const OptimizationProblem& prob);

/// d(P) = f(Best(P)) - f*. Throws gap_unavailable when f* is unknown.
double optimality_gap(const Population& pop, const OptimizationProblem& prob);

EpsClass classify_gap(double gap, double eps);
EpsClass classify_eps(const Population& pop, const OptimizationProblem& prob, double eps);
/// Membership in the strict eps-optimal set (d < eps).
bool in_eps_set(const Population& pop, const OptimizationProblem& prob, double eps);

inline constexpr std::size_t kDefaultEnumerationBits = 20;

/// All |Omega|^n bitstring populations in lexicographic order.
std::vector<Population> enumerate_states(const SearchSpace& space, std::size_t n,
                                         std::size_t max_total_bits = kDefaultEnumerationBits);

/// Uniform sample from the space (uniform bits or uniform per box coordinate).
Individual random_individual(const SearchSpace& space, RandomStream& rng);
Population random_population(const SearchSpace& space, std::size_t n, RandomStream& rng);

/// Clamps real coordinates into the box; bitstrings are returned unchanged.
Individual clamp_to_space(Individual x, const SearchSpace& space);

bool contains(const SearchSpace& space, const Individual& x);

}  // namespace sgo
