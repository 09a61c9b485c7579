#include "basex/init.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "basex/errors.hpp"
#include "basex/simd.hpp"

namespace basex {

const char* to_string(InitMethod m) {
  switch (m) {
    case InitMethod::greedy_det:
      return "greedy_det";
    case InitMethod::max_weight_tree:
      return "max_weight_tree";
    case InitMethod::table_argmax:
      return "table_argmax";
  }
  return "unknown";
}

InitReport greedy_init_kdpp(const KDPP& d) {
  const auto& m = d.ensemble();
  const std::size_t n = d.ground_size();
  const std::size_t k = d.degree();
  const double tol = linalg::default_psd_tolerance(m);

  // Incremental Cholesky factor in insertion order: candidate evaluation is
  // one O(|S|^2) triangular solve instead of a fresh factorization.
  std::vector<int> chosen;
  std::vector<double> lower(k * k, 0.0);
  std::vector<double> v(k, 0.0);
  std::vector<double> best_v(k, 0.0);
  double log_det = 0.0;

  for (std::size_t round = 0; round < k; ++round) {
    int best_j = -1;
    double best_schur = tol;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::find(chosen.begin(), chosen.end(), static_cast<int>(j)) !=
          chosen.end()) {
        continue;
      }
      for (std::size_t r = 0; r < round; ++r) {
        const double* rowr = lower.data() + r * k;
        v[r] = (m(static_cast<std::size_t>(chosen[r]), j) -
                simd::dot(rowr, v.data(), r)) /
               rowr[r];
      }
      const double schur = m(j, j) - simd::dot(v.data(), v.data(), round);
      if (schur > best_schur) {  // strict: ties keep the smallest index
        best_schur = schur;
        best_j = static_cast<int>(j);
        std::copy(v.begin(), v.begin() + round, best_v.begin());
      }
    }
    if (best_j < 0) {
      throw DomainError("greedy initialization stalled at size " +
                        std::to_string(round) + "; k exceeds the ensemble rank");
    }
    double* row = lower.data() + round * k;
    std::copy(best_v.begin(), best_v.begin() + round, row);
    row[round] = std::sqrt(best_schur);
    log_det += std::log(best_schur);
    chosen.push_back(best_j);
  }

  return InitReport{Subset(std::move(chosen)), log_det, InitMethod::greedy_det};
}

InitReport init_spanning_tree(const SpanningTreeDistribution& g) {
  const auto& edges = g.edges();
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return edges[a].weight > edges[b].weight;
  });

  std::vector<int> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  std::vector<int> tree;
  double log_mass = 0.0;
  for (std::size_t e : order) {
    const int ru = find(edges[e].u);
    const int rv = find(edges[e].v);
    if (ru == rv) continue;
    parent[ru] = rv;
    tree.push_back(static_cast<int>(e));
    log_mass += std::log(edges[e].weight);
    if (tree.size() == g.degree()) break;
  }
  return InitReport{Subset(std::move(tree)), log_mass, InitMethod::max_weight_tree};
}

InitReport init_table(const ExplicitTable& t) {
  const Subset* best = nullptr;
  double best_weight = 0.0;
  for (const auto& [s, w] : t.entries()) {  // lex ascending, so ties keep
    if (w > best_weight) {                  // the smallest subset
      best_weight = w;
      best = &s;
    }
  }
  return InitReport{*best, std::log(best_weight), InitMethod::table_argmax};
}

InitReport initialize(const HomogeneousDistribution& d) {
  if (const auto* kdpp = dynamic_cast<const KDPP*>(&d)) {
    return greedy_init_kdpp(*kdpp);
  }
  if (const auto* tree = dynamic_cast<const SpanningTreeDistribution*>(&d)) {
    return init_spanning_tree(*tree);
  }
  if (const auto* table = dynamic_cast<const ExplicitTable*>(&d)) {
    return init_table(*table);
  }
  throw InputError("no initializer for this distribution backend");
}

}  // namespace basex
