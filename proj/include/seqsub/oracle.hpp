#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "seqsub/core.hpp"

// Desk-scale exact ground truth: optimal sequences, exact expected marginal
// contributions, exact expectations, curvature measurement, and checkers for
// the two enumeration lemmas. Every routine here either enumerates exactly or
// refuses via EnumerationGuardError; nothing is sampled.

namespace seqsub {

// Hard cap on the number of tuples/subsets any oracle routine will enumerate.
inline constexpr std::uint64_t kEnumerationGuard = 1'000'000;
// Curvature measurement walks all 2^n subsets.
inline constexpr int kCurvatureMaxGround = 10;

struct OracleResult {
  Sequence optimum_sequence;
  Utility optimum_value = 0.0;
};

struct FunctionCheckResult {
  bool zero_on_empty = true;
  bool monotone = true;
  bool submodular = true;
  double worst_violation = 0.0;  // most negative slack seen across all checks

  bool ok() const { return zero_on_empty && monotone && submodular; }
};

struct Lemma4Result {
  bool holds = false;
  double lhs = 0.0;    // E_R[f(R | S)]
  double rhs = 0.0;    // (1 - c) * E_R[f(R)]
  double slack = 0.0;  // lhs - rhs
  double curvature = 0.0;
};

struct Lemma5Result {
  bool skipped = false;  // needs n >= 2k
  bool holds = false;
  double lhs = 0.0;  // sum over slots of exact Delta at the optimum's items
  double rhs = 0.0;  // alpha * E[F(Pi' virtual-union pi*) - F(Pi')]
  double alpha = 0.0;
};

// Number of ordered tuples of t distinct items from a pool of size n,
// saturating at 2^64-1.
std::uint64_t ordered_tuple_count(int pool_size, int t);

// Exhaustive maximum of sequence_value over all ordered k-sequences.
// Ties break to the lexicographically smallest sequence.
OracleResult brute_force_optimal(const Instance& inst);

// Exact Delta(i, t) = E[F(Pi_{t+1,i})] - E[F(Pi_{t,-i})], slot t in 0..k-1,
// computed by enumerating ordered t-sequences over the ground set minus i.
double exact_delta(const Instance& inst, ItemId i, int t);

// Same quantity through the telescoped form: the average over size-t subsets
// R excluding i of sum_{j=t+1..k} f_j(i | R). Agrees with exact_delta up to
// roundoff; kept separate so tests can cross-check the two routes.
double exact_delta_marginal_form(const Instance& inst, ItemId i, int t);

// Exact mean of sequence_value over all ordered k-sequences drawn from the
// given item pool; the one-argument form uses the whole ground set.
double exact_expected_f(const Instance& inst);
double exact_expected_f(const Instance& inst, std::span<const ItemId> pool);

// Smallest c with f(i|S) >= (1-c) f({i}) over all S and i not in S, skipping
// items with f({i}) = 0 (their marginals are forced to 0 anyway). Returns 0
// when no pair constrains the ratio.
double measure_curvature(const SetFunction& f, int n);

// Instance curvature: max over f_1..f_k of the per-function curvature.
double measure_instance_curvature(const Instance& inst);

// Brute-force verification that f is zero on empty, monotone, and submodular.
// Walks all 2^n subsets; n <= kCurvatureMaxGround.
FunctionCheckResult check_set_function(const SetFunction& f, int n);

// E_R[f(R | S)] >= (1-c) E_R[f(R)] with R a uniform size-t subset of the
// ground set minus S; both sides enumerated exactly.
Lemma4Result check_lemma4(const SetFunction& f, int n, std::span<const ItemId> s, int t);

// sum_t Delta(pi*_{t+1}, t) >= alpha * E[F(Pi' virtual-union pi*) - F(Pi')]
// with Pi' a uniform ordered k-sequence over the ground set minus pi*.
// Skipped (not failed) when n < 2k, where Pi' has no support.
Lemma5Result check_lemma5(const Instance& inst);

// Objective of the virtual sequence that stacks pi and other at each slot:
// sum_{t=1..k} f_t(pi_[t] union other_[t]).
double virtual_union_value(const Instance& inst, const Sequence& pi, const Sequence& other);

}  // namespace seqsub
