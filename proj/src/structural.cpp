#include "sgo/structural.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "sgo/error.hpp"

namespace sgo {

IndexSet::IndexSet(std::vector<std::size_t> indices, std::size_t n) : indices_(std::move(indices)), n_(n) {
  if (indices_.empty()) throw Error(ErrorCode::invalid_index_set, "index set must be non-empty");
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 1 || indices_[i] > n_) {
      throw Error(ErrorCode::invalid_index_set,
                  "index " + std::to_string(indices_[i]) + " outside 1.." + std::to_string(n_));
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw Error(ErrorCode::invalid_index_set, "indices must be strictly increasing");
    }
  }
}

IndexSet IndexSet::range(std::size_t first, std::size_t last, std::size_t n) {
  if (first > last) throw Error(ErrorCode::invalid_index_set, "empty index range");
  std::vector<std::size_t> idx(last - first + 1);
  std::iota(idx.begin(), idx.end(), first);
  return IndexSet(std::move(idx), n);
}

Permutation::Permutation(std::vector<std::size_t> order) : order_(std::move(order)) {
  std::vector<bool> seen(order_.size() + 1, false);
  if (order_.empty()) throw Error(ErrorCode::invalid_argument, "empty permutation");
  for (auto i : order_) {
    if (i < 1 || i > order_.size() || seen[i]) {
      throw Error(ErrorCode::invalid_argument, "not a permutation of 1..n");
    }
    seen[i] = true;
  }
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(order_.size());
  for (std::size_t k = 0; k < order_.size(); ++k) inv[order_[k] - 1] = k + 1;
  return Permutation(std::move(inv));
}

Kernel swap_kernel() {
  return deterministic("swap", 2, 2, [](const Population& x) { return Population{x[1], x[0]}; });
}

Kernel projection_kernel(const IndexSet& indices) {
  std::string name = "project{";
  for (std::size_t i = 0; i < indices.size(); ++i) name += (i ? "," : "") + std::to_string(indices.indices()[i]);
  name += "}";
  return deterministic(std::move(name), indices.arity(), indices.size(), [idx = indices.indices()](const Population& x) {
    Population out;
    for (auto i : idx) out.push_back(x[i - 1]);
    return out;
  });
}

Kernel permutation_kernel(const Permutation& perm) {
  const std::size_t n = perm.size();
  std::vector<Kernel> blocks;
  blocks.reserve(n);
  for (auto i : perm.order()) blocks.push_back(projection_kernel(IndexSet({i}, n)));
  return join(std::move(blocks));
}

Kernel random_scan_permutation(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "random scan needs n >= 1");
  SampleFn sample = [](const Population& x, RandomStream& rng) {
    std::vector<Individual> members = x.members();
    for (std::size_t i = members.size(); i > 1; --i) {
      const std::size_t j = rng.uniform_index(0, i - 1);
      std::swap(members[i - 1], members[j]);
    }
    return Population(std::move(members));
  };
  std::optional<RowFn> exact;
  if (n <= kMaxExactPermutationArity) {
    exact = [n](const Population& x) {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      double count = 1.0;
      for (std::size_t i = 2; i <= n; ++i) count *= static_cast<double>(i);
      const double w = 1.0 / count;
      Distribution row;
      do {
        Population y;
        for (auto i : order) y.push_back(x[i]);
        row[std::move(y)] += w;
      } while (std::next_permutation(order.begin(), order.end()));
      return row;
    };
  }
  return primitive("random-scan-permutation", n, n, std::move(sample), std::move(exact));
}

Kernel sort_two_kernel(const OptimizationProblem& prob) {
  return deterministic("sort-two", 2, 2, [prob](const Population& z) {
    if (prob.evaluate(z[0]) < prob.evaluate(z[1])) return z;
    return Population{z[1], z[0]};
  });
}

Kernel bubble_pass_kernel(std::size_t n, std::size_t k, const OptimizationProblem& prob) {
  if (n < 2 || k < 1 || k > n - 1) {
    throw Error(ErrorCode::invalid_argument, "bubble pass needs 1 <= k <= n-1");
  }
  std::vector<Kernel> parts;
  if (k > 1) parts.push_back(projection_kernel(IndexSet::range(1, k - 1, n)));
  parts.push_back(compose(sort_two_kernel(prob), projection_kernel(IndexSet({k, k + 1}, n))));
  if (k + 2 <= n) parts.push_back(projection_kernel(IndexSet::range(k + 2, n, n)));
  return parts.size() == 1 ? parts.front() : join(std::move(parts));
}

Kernel bubble_sweep_kernel(std::size_t n, std::size_t k, const OptimizationProblem& prob) {
  Kernel sweep = bubble_pass_kernel(n, 1, prob);
  for (std::size_t j = 2; j <= k; ++j) sweep = compose(bubble_pass_kernel(n, j, prob), sweep);
  return sweep;
}

Kernel sort_network_kernel(std::size_t n, const OptimizationProblem& prob, std::size_t sweeps) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "sorting needs n >= 2");
  if (sweeps < 1 || sweeps > n - 1) throw Error(ErrorCode::invalid_argument, "sweep count must be in 1..n-1");
  Kernel net = bubble_sweep_kernel(n, n - 1, prob);
  for (std::size_t s = 2; s <= sweeps; ++s) net = compose(bubble_sweep_kernel(n, n - s, prob), net);
  return net;
}

Kernel full_sort_kernel(std::size_t n, const OptimizationProblem& prob) {
  return sort_network_kernel(n, prob, n - 1);
}

Kernel best_two_of_four_kernel(const OptimizationProblem& prob) {
  return compose(projection_kernel(IndexSet({1, 2}, 4)), sort_network_kernel(4, prob, 2));
}

}  // namespace sgo
