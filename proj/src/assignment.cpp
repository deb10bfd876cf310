#include "seqsub/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace seqsub {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Minimum-cost rectangular assignment (rows <= cols) by shortest augmenting
// paths with dual potentials. Every row ends up matched; returns the matched
// column per row.
std::vector<int> min_cost_assign(const std::vector<std::vector<double>>& cost) {
  const int nr = static_cast<int>(cost.size());
  const int nc = nr == 0 ? 0 : static_cast<int>(cost.front().size());
  std::vector<double> u(static_cast<std::size_t>(nr), 0.0);
  std::vector<double> v(static_cast<std::size_t>(nc), 0.0);
  std::vector<int> col4row(static_cast<std::size_t>(nr), -1);
  std::vector<int> row4col(static_cast<std::size_t>(nc), -1);

  for (int cur_row = 0; cur_row < nr; ++cur_row) {
    std::vector<double> shortest(static_cast<std::size_t>(nc), kInf);
    std::vector<int> pred(static_cast<std::size_t>(nc), cur_row);
    std::vector<char> row_seen(static_cast<std::size_t>(nr), 0);
    std::vector<char> col_done(static_cast<std::size_t>(nc), 0);

    double min_val = 0.0;
    int i = cur_row;
    int sink = -1;
    while (sink == -1) {
      row_seen[static_cast<std::size_t>(i)] = 1;
      double lowest = kInf;
      int index = -1;
      for (int j = 0; j < nc; ++j) {
        if (col_done[static_cast<std::size_t>(j)]) continue;
        const double reduced = min_val + cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                               u[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)];
        if (reduced < shortest[static_cast<std::size_t>(j)]) {
          shortest[static_cast<std::size_t>(j)] = reduced;
          pred[static_cast<std::size_t>(j)] = i;
        }
        if (shortest[static_cast<std::size_t>(j)] < lowest ||
            (shortest[static_cast<std::size_t>(j)] == lowest &&
             row4col[static_cast<std::size_t>(j)] == -1)) {
          lowest = shortest[static_cast<std::size_t>(j)];
          index = j;
        }
      }
      if (index == -1 || lowest == kInf) {
        throw std::invalid_argument("assignment problem is infeasible");
      }
      min_val = lowest;
      if (row4col[static_cast<std::size_t>(index)] == -1) {
        sink = index;
      } else {
        i = row4col[static_cast<std::size_t>(index)];
      }
      col_done[static_cast<std::size_t>(index)] = 1;
    }

    u[static_cast<std::size_t>(cur_row)] += min_val;
    for (int ip = 0; ip < nr; ++ip) {
      if (row_seen[static_cast<std::size_t>(ip)] && ip != cur_row) {
        u[static_cast<std::size_t>(ip)] +=
            min_val - shortest[static_cast<std::size_t>(col4row[static_cast<std::size_t>(ip)])];
      }
    }
    for (int j = 0; j < nc; ++j) {
      if (col_done[static_cast<std::size_t>(j)]) {
        v[static_cast<std::size_t>(j)] -= min_val - shortest[static_cast<std::size_t>(j)];
      }
    }

    int j = sink;
    while (true) {
      const int ip = pred[static_cast<std::size_t>(j)];
      row4col[static_cast<std::size_t>(j)] = ip;
      std::swap(col4row[static_cast<std::size_t>(ip)], j);
      if (ip == cur_row) break;
    }
  }
  return col4row;
}

// Total of an assignment, always summed in position order so equal-value
// assignments compare bit-for-bit equal.
double total_in_position_order(const std::vector<std::vector<double>>& weights,
                               const std::vector<ItemId>& items) {
  double total = 0.0;
  for (std::size_t t = 0; t < items.size(); ++t) {
    total += weights[static_cast<std::size_t>(items[t])][t];
  }
  return total;
}

// Optimal items for positions t0..k-1 using only unused items, appended onto
// prefix; positions are rows, remaining items are columns, costs negated for
// maximization.
std::vector<ItemId> complete_optimally(const std::vector<std::vector<double>>& weights,
                                       int k, std::vector<ItemId> prefix,
                                       const std::vector<char>& used) {
  const int t0 = static_cast<int>(prefix.size());
  if (t0 == k) return prefix;
  std::vector<ItemId> free_items;
  for (ItemId i = 0; i < static_cast<ItemId>(weights.size()); ++i) {
    if (!used[static_cast<std::size_t>(i)]) free_items.push_back(i);
  }
  std::vector<std::vector<double>> cost(
      static_cast<std::size_t>(k - t0),
      std::vector<double>(free_items.size()));
  for (int t = t0; t < k; ++t) {
    for (std::size_t j = 0; j < free_items.size(); ++j) {
      cost[static_cast<std::size_t>(t - t0)][j] =
          -weights[static_cast<std::size_t>(free_items[j])][static_cast<std::size_t>(t)];
    }
  }
  const std::vector<int> col4row = min_cost_assign(cost);
  for (int t = t0; t < k; ++t) {
    prefix.push_back(free_items[static_cast<std::size_t>(col4row[static_cast<std::size_t>(t - t0)])]);
  }
  return prefix;
}

}  // namespace

Assignment solve_P1(const std::vector<std::vector<double>>& weights, int n, int k) {
  if (n < 1 || static_cast<int>(weights.size()) != n) {
    throw std::invalid_argument("weights must have one row per item");
  }
  if (k < 1 || k > n) {
    throw std::invalid_argument("P.1 is infeasible unless 1 <= k <= n");
  }
  for (const auto& row : weights) {
    if (static_cast<int>(row.size()) != k) {
      throw std::invalid_argument("weights must have one column per position");
    }
    for (double w : row) {
      if (!std::isfinite(w)) throw std::invalid_argument("weights must be finite");
    }
  }

  std::vector<char> none(static_cast<std::size_t>(n), 0);
  std::vector<ItemId> best = complete_optimally(weights, k, {}, none);
  double best_total = total_in_position_order(weights, best);

  // Lexicographic refinement: fix positions left to right, and at each one
  // try every smaller unused item id; keep the swap when an optimal
  // completion matches the incumbent total.
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (int t = 0; t < k; ++t) {
    for (ItemId i = 0; i < best[static_cast<std::size_t>(t)]; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      std::vector<ItemId> prefix(best.begin(), best.begin() + t);
      prefix.push_back(i);
      std::vector<char> used_now = used;
      used_now[static_cast<std::size_t>(i)] = 1;
      const std::vector<ItemId> candidate =
          complete_optimally(weights, k, std::move(prefix), used_now);
      const double cand_total = total_in_position_order(weights, candidate);
      if (cand_total >= best_total) {
        best = candidate;
        best_total = cand_total;
        break;
      }
    }
    used[static_cast<std::size_t>(best[static_cast<std::size_t>(t)])] = 1;
  }

  return Assignment{std::move(best), best_total};
}

Assignment solve_P1(const DeltaMatrix& weights) {
  std::vector<std::vector<double>> w(
      static_cast<std::size_t>(weights.n),
      std::vector<double>(static_cast<std::size_t>(weights.k)));
  for (ItemId i = 0; i < weights.n; ++i) {
    for (int t = 0; t < weights.k; ++t) {
      w[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] = weights.at(i, t);
    }
  }
  return solve_P1(w, weights.n, weights.k);
}

Sequence assignment_to_sequence(const Assignment& a) {
  return Sequence(a.position_to_item);
}

}  // namespace seqsub
