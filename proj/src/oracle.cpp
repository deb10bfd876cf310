#include "seqsub/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "seqsub/algorithm.hpp"

namespace seqsub {

namespace {

// Visits every ordered t-tuple of distinct items from pool, lexicographic in
// pool order. The visitor receives a span over the current tuple.
void visit_ordered_tuples(std::span<const ItemId> pool, int t,
                          const std::function<void(std::span<const ItemId>)>& visit) {
  std::vector<ItemId> tuple(static_cast<std::size_t>(t));
  std::vector<bool> used(pool.size(), false);
  std::function<void(int)> rec = [&](int depth) {
    if (depth == t) {
      visit(tuple);
      return;
    }
    for (std::size_t p = 0; p < pool.size(); ++p) {
      if (used[p]) continue;
      used[p] = true;
      tuple[static_cast<std::size_t>(depth)] = pool[p];
      rec(depth + 1);
      used[p] = false;
    }
  };
  rec(0);
}

// Visits every size-t subset of pool, as a span of items.
void visit_subsets(std::span<const ItemId> pool, int t,
                   const std::function<void(std::span<const ItemId>)>& visit) {
  std::vector<ItemId> subset(static_cast<std::size_t>(t));
  std::function<void(int, std::size_t)> rec = [&](int depth, std::size_t start) {
    if (depth == t) {
      visit(subset);
      return;
    }
    for (std::size_t p = start; p + static_cast<std::size_t>(t - depth) <= pool.size(); ++p) {
      subset[static_cast<std::size_t>(depth)] = pool[p];
      rec(depth + 1, p + 1);
    }
  };
  rec(0, 0);
}

std::uint64_t subset_count(int pool_size, int t) {
  if (t < 0 || t > pool_size) return 0;
  std::uint64_t c = 1;
  for (int j = 1; j <= t; ++j) {
    const double projected = static_cast<double>(c) * (pool_size - t + j) / j;
    if (projected > 1.8e19) return std::numeric_limits<std::uint64_t>::max();
    c = c * static_cast<std::uint64_t>(pool_size - t + j) / static_cast<std::uint64_t>(j);
  }
  return c;
}

void require_guard(std::uint64_t count, const char* what) {
  if (count > kEnumerationGuard) {
    throw EnumerationGuardError(std::string(what) + ": enumeration of " + std::to_string(count) +
                                " states exceeds the guard of " + std::to_string(kEnumerationGuard));
  }
}

std::vector<ItemId> ground_items(int n) {
  std::vector<ItemId> items(static_cast<std::size_t>(n));
  std::iota(items.begin(), items.end(), 0);
  return items;
}

std::vector<ItemId> ground_minus(int n, std::span<const ItemId> excluded) {
  std::vector<bool> out(static_cast<std::size_t>(n), false);
  for (ItemId id : excluded) out[static_cast<std::size_t>(id)] = true;
  std::vector<ItemId> pool;
  pool.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (!out[static_cast<std::size_t>(i)]) pool.push_back(i);
  }
  return pool;
}

}  // namespace

std::uint64_t ordered_tuple_count(int pool_size, int t) {
  if (t < 0 || t > pool_size) return 0;
  std::uint64_t count = 1;
  for (int j = 0; j < t; ++j) {
    const std::uint64_t factor = static_cast<std::uint64_t>(pool_size - j);
    if (count > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    count *= factor;
  }
  return count;
}

OracleResult brute_force_optimal(const Instance& inst) {
  inst.validate();
  const int n = inst.n();
  const int k = inst.k;
  require_guard(ordered_tuple_count(n, k), "brute_force_optimal");

  const auto pool = ground_items(n);
  OracleResult best;
  best.optimum_value = -std::numeric_limits<double>::infinity();
  visit_ordered_tuples(pool, k, [&](std::span<const ItemId> tuple) {
    Sequence candidate(std::vector<ItemId>(tuple.begin(), tuple.end()));
    const double value = sequence_value(inst, candidate);
    if (value > best.optimum_value) {
      best.optimum_value = value;
      best.optimum_sequence = std::move(candidate);
    }
  });
  return best;
}

double exact_delta(const Instance& inst, ItemId i, int t) {
  inst.validate();
  const int n = inst.n();
  if (i < 0 || i >= n) throw std::invalid_argument("exact_delta: item out of range");
  if (t < 0 || t >= inst.k) throw std::invalid_argument("exact_delta: slot out of 0..k-1");
  const auto pool = ground_minus(n, std::span<const ItemId>(&i, 1));
  require_guard(ordered_tuple_count(static_cast<int>(pool.size()), t), "exact_delta");

  // One pass enumerates the ordered t-sequences that exclude i; appending i
  // to each yields exactly the (t+1)-sequences with i in the last slot.
  double sum_with = 0.0;
  double sum_without = 0.0;
  std::uint64_t count = 0;
  std::vector<ItemId> extended(static_cast<std::size_t>(t) + 1);
  visit_ordered_tuples(pool, t, [&](std::span<const ItemId> tuple) {
    std::copy(tuple.begin(), tuple.end(), extended.begin());
    extended.back() = i;
    Sequence with(extended);
    Sequence without(std::vector<ItemId>(tuple.begin(), tuple.end()));
    sum_with += sequence_value(inst, with);
    sum_without += sequence_value(inst, without);
    ++count;
  });
  return sum_with / static_cast<double>(count) - sum_without / static_cast<double>(count);
}

double exact_delta_marginal_form(const Instance& inst, ItemId i, int t) {
  inst.validate();
  const int n = inst.n();
  if (i < 0 || i >= n) throw std::invalid_argument("exact_delta_marginal_form: item out of range");
  if (t < 0 || t >= inst.k) throw std::invalid_argument("exact_delta_marginal_form: slot out of 0..k-1");
  const auto pool = ground_minus(n, std::span<const ItemId>(&i, 1));
  require_guard(subset_count(static_cast<int>(pool.size()), t), "exact_delta_marginal_form");

  double total = 0.0;
  std::uint64_t count = 0;
  visit_subsets(pool, t, [&](std::span<const ItemId> subset) {
    double gain = 0.0;
    for (int j = t + 1; j <= inst.k; ++j) {
      gain += marginal(inst.function(j), i, subset);
    }
    total += gain;
    ++count;
  });
  return total / static_cast<double>(count);
}

double exact_expected_f(const Instance& inst) {
  const auto pool = ground_items(inst.n());
  return exact_expected_f(inst, pool);
}

double exact_expected_f(const Instance& inst, std::span<const ItemId> pool) {
  inst.validate();
  if (static_cast<int>(pool.size()) < inst.k) {
    throw std::invalid_argument("exact_expected_f: pool smaller than k");
  }
  require_guard(ordered_tuple_count(static_cast<int>(pool.size()), inst.k), "exact_expected_f");
  double sum = 0.0;
  std::uint64_t count = 0;
  visit_ordered_tuples(pool, inst.k, [&](std::span<const ItemId> tuple) {
    Sequence pi(std::vector<ItemId>(tuple.begin(), tuple.end()));
    sum += sequence_value(inst, pi);
    ++count;
  });
  return sum / static_cast<double>(count);
}

double measure_curvature(const SetFunction& f, int n) {
  if (n < 1) throw std::invalid_argument("measure_curvature: n must be >= 1");
  if (n > kCurvatureMaxGround) {
    throw EnumerationGuardError("measure_curvature: ground set larger than " +
                                std::to_string(kCurvatureMaxGround));
  }
  // Precompute f on all subsets; the ratio scan is then table lookups.
  const std::size_t m = std::size_t{1} << n;
  std::vector<double> value(m);
  std::vector<ItemId> scratch;
  for (std::size_t mask = 0; mask < m; ++mask) {
    scratch.clear();
    for (int i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) scratch.push_back(i);
    }
    value[mask] = f.eval(scratch);
  }

  double min_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double singleton = value[std::size_t{1} << i];
    if (singleton <= 0.0) continue;  // unconstraining pair
    for (std::size_t mask = 0; mask < m; ++mask) {
      if (mask & (std::size_t{1} << i)) continue;
      const double gain = value[mask | (std::size_t{1} << i)] - value[mask];
      min_ratio = std::min(min_ratio, gain / singleton);
    }
  }
  if (!std::isfinite(min_ratio)) return 0.0;
  return std::clamp(1.0 - min_ratio, 0.0, 1.0);
}

double measure_instance_curvature(const Instance& inst) {
  inst.validate();
  double c = 0.0;
  for (int t = 1; t <= inst.k; ++t) {
    c = std::max(c, measure_curvature(inst.function(t), inst.n()));
  }
  return c;
}

FunctionCheckResult check_set_function(const SetFunction& f, int n) {
  if (n < 1) throw std::invalid_argument("check_set_function: n must be >= 1");
  if (n > kCurvatureMaxGround) {
    throw EnumerationGuardError("check_set_function: ground set larger than " +
                                std::to_string(kCurvatureMaxGround));
  }
  const std::size_t m = std::size_t{1} << n;
  std::vector<double> value(m);
  std::vector<ItemId> scratch;
  for (std::size_t mask = 0; mask < m; ++mask) {
    scratch.clear();
    for (int i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) scratch.push_back(i);
    }
    value[mask] = f.eval(scratch);
  }

  constexpr double kTol = 1e-9;
  FunctionCheckResult result;
  result.zero_on_empty = value[0] == 0.0;

  auto note = [&](double slack) { result.worst_violation = std::min(result.worst_violation, slack); };

  for (std::size_t mask = 0; mask < m; ++mask) {
    for (int i = 0; i < n; ++i) {
      const std::size_t bit = std::size_t{1} << i;
      if (mask & bit) continue;
      const double gain = value[mask | bit] - value[mask];
      if (gain < -kTol) result.monotone = false;
      note(gain);
      // Submodularity: the gain of i may only shrink on supersets. Checking
      // against all one-element extensions Y = X + j is equivalent to
      // checking all X subset-of Y.
      for (int j = 0; j < n; ++j) {
        const std::size_t jbit = std::size_t{1} << j;
        if (j == i || (mask & jbit)) continue;
        const double gain_super = value[mask | jbit | bit] - value[mask | jbit];
        if (gain_super > gain + kTol) result.submodular = false;
        note(gain - gain_super);
      }
    }
  }
  return result;
}

Lemma4Result check_lemma4(const SetFunction& f, int n, std::span<const ItemId> s, int t) {
  if (t < 0) throw std::invalid_argument("check_lemma4: t must be >= 0");
  const auto pool = ground_minus(n, s);
  if (t > static_cast<int>(pool.size())) {
    throw std::invalid_argument("check_lemma4: t larger than the pool outside S");
  }
  require_guard(subset_count(static_cast<int>(pool.size()), t), "check_lemma4");

  Lemma4Result result;
  result.curvature = measure_curvature(f, n);

  const double f_s = f.eval(s);
  double sum_cond = 0.0;
  double sum_plain = 0.0;
  std::uint64_t count = 0;
  std::vector<ItemId> with_s(s.begin(), s.end());
  const std::size_t s_len = with_s.size();
  visit_subsets(pool, t, [&](std::span<const ItemId> subset) {
    with_s.resize(s_len);
    with_s.insert(with_s.end(), subset.begin(), subset.end());
    sum_cond += f.eval(with_s) - f_s;
    sum_plain += f.eval(subset);
    ++count;
  });
  result.lhs = sum_cond / static_cast<double>(count);
  result.rhs = (1.0 - result.curvature) * (sum_plain / static_cast<double>(count));
  result.slack = result.lhs - result.rhs;
  result.holds = result.slack >= -1e-12;
  return result;
}

Lemma5Result check_lemma5(const Instance& inst) {
  inst.validate();
  const int n = inst.n();
  const int k = inst.k;

  Lemma5Result result;
  result.alpha = compute_alpha(n, k);
  if (n < 2 * k) {
    result.skipped = true;  // Pi' needs k items outside pi*
    return result;
  }

  const OracleResult opt = brute_force_optimal(inst);
  for (int t = 0; t < k; ++t) {
    result.lhs += exact_delta(inst, opt.optimum_sequence.at(t), t);
  }

  const auto pool = ground_minus(n, opt.optimum_sequence.items());
  require_guard(ordered_tuple_count(static_cast<int>(pool.size()), k), "check_lemma5");
  double sum_gap = 0.0;
  std::uint64_t count = 0;
  visit_ordered_tuples(pool, k, [&](std::span<const ItemId> tuple) {
    Sequence pi(std::vector<ItemId>(tuple.begin(), tuple.end()));
    sum_gap += virtual_union_value(inst, pi, opt.optimum_sequence) - sequence_value(inst, pi);
    ++count;
  });
  result.rhs = result.alpha * (sum_gap / static_cast<double>(count));
  result.holds = result.lhs - result.rhs >= -1e-12;
  return result;
}

double virtual_union_value(const Instance& inst, const Sequence& pi, const Sequence& other) {
  inst.validate();
  if (pi.size() > inst.k || other.size() > inst.k) {
    throw std::invalid_argument("virtual_union_value: sequence longer than k");
  }
  double total = 0.0;
  std::vector<ItemId> joint;
  for (int t = 1; t <= inst.k; ++t) {
    const auto a = pi.prefix(t);
    const auto b = other.prefix(t);
    joint.assign(a.begin(), a.end());
    for (ItemId id : b) {
      if (std::find(a.begin(), a.end(), id) == a.end()) joint.push_back(id);
    }
    total += inst.function(t).eval(joint);
  }
  return total;
}

}  // namespace seqsub
