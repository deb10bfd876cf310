#pragma once

#include <vector>

#include "seqsub/core.hpp"
#include "seqsub/estimation.hpp"

// P.1: place one item in every position t = 1..k, each item at most once,
// maximizing the total of the position-wise weights. Solved exactly; among
// optimal assignments the lexicographically smallest position_to_item wins.

namespace seqsub {

struct Assignment {
  std::vector<ItemId> position_to_item;  // length k, distinct ids
  double total_weight = 0.0;
};

// weights[item][slot], n rows and k columns, entries may be negative. Every
// position gets filled even when all its weights are negative (P.1 constrains
// positions with equalities). Throws std::invalid_argument when k > n.
Assignment solve_P1(const std::vector<std::vector<double>>& weights, int n, int k);

// Convenience overload reading the estimator's matrix directly.
Assignment solve_P1(const DeltaMatrix& weights);

// The sequence whose t-th element is position_to_item[t].
Sequence assignment_to_sequence(const Assignment& a);

}  // namespace seqsub
