#pragma once

#include <string>

#include "basex/distribution.hpp"
#include "basex/subset.hpp"

namespace basex {

enum class InitMethod { greedy_det, max_weight_tree, table_argmax };

const char* to_string(InitMethod m);

struct InitReport {
  Subset s0;
  double log_mass = 0.0;
  InitMethod method = InitMethod::greedy_det;
};

// Greedy volume maximization: k rounds, each adding the element with the
// largest determinant extension (ties broken toward the smallest index).
// The result is within a factor k! of the maximum determinant.
InitReport greedy_init_kdpp(const KDPP& d);

// Maximum-weight spanning tree (greedy over edges sorted by descending
// weight, ties toward the smaller edge index); attains the mode of the
// tree distribution.
InitReport init_spanning_tree(const SpanningTreeDistribution& g);

// Argmax-weight entry; ties toward the lexicographically smallest subset.
InitReport init_table(const ExplicitTable& t);

// Dispatch on the concrete backend type.
InitReport initialize(const HomogeneousDistribution& d);

}  // namespace basex
