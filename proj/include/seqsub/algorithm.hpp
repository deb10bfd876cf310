#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "seqsub/assignment.hpp"
#include "seqsub/core.hpp"
#include "seqsub/estimation.hpp"
#include "seqsub/rng.hpp"
#include "seqsub/sampling.hpp"

// Sequencing-from-Samples. From the dataset alone: estimate the marginal
// contributions, solve P.1 for the matching sequence pi_s, then pick the
// branch. With curvature c and alpha = P(a uniform ordered k-sample avoids a
// fixed k-set):
//
//   Case A   (1-c)^2 >= alpha*(1-c)/(1+c-c^2)        -> return pi_s
//   Case B   (1-c)*sum_t delta_tilde(pi_s_t, t-1) >= avg(Phi_k)
//                                                    -> return pi_s
//   fallback                                         -> uniform random k-sequence
//
// Matching-only mode skips the case split and always returns pi_s (the
// unknown-curvature variant, approximation ratio (1-c)^2).

namespace seqsub {

enum class AlgoMode { kFull, kMatchingOnly };
enum class Branch { kCaseA, kCaseB, kRandomFallback };

const char* branch_name(Branch b);

struct AlgoConfig {
  // Curvature c in [0,1] when known; full mode requires it.
  std::optional<double> curvature;
  AlgoMode mode = AlgoMode::kFull;
  std::uint64_t fallback_seed = 0;
  BucketPolicy policy = BucketPolicy::kStrict;
};

// Everything needed to audit the branch decision. Values that were not
// evaluated on the taken path (e.g. avg(Phi_k) under Case A) are NaN.
struct AlgoDiagnostics {
  double c = 0.0;
  double alpha = 0.0;
  double case_a_lhs = 0.0;       // (1-c)^2
  double case_a_rhs = 0.0;       // alpha*(1-c)/(1+c-c^2)
  double sum_delta_pi_s = 0.0;   // sum_{t=1..k} delta_tilde(pi_s_t, t-1)
  double case_b_lhs = 0.0;       // (1-c) * sum_delta_pi_s
  double avg_phi_k = 0.0;        // Case B right-hand side
};

struct AlgoOutcome {
  Sequence sequence;   // the returned pi
  Branch branch = Branch::kCaseA;
  Sequence pi_s;       // the matching sequence, whatever branch won
  Assignment matching;
  AlgoDiagnostics diag;
  // Smallest bucket the estimator consumed (last(i,1..k), excl(i,1..k-1),
  // full); a coarse sufficiency indicator for the sample count.
  std::size_t min_bucket = 0;
};

// alpha = prod_{j=0..k-1} (n-k-j)/(n-j), the probability that a uniform
// ordered k-sample avoids a fixed k-item set; 0 when n < 2k.
double compute_alpha(int n, int k);

// Uniform over all n!/(n-k)! ordered k-sequences of distinct items.
Sequence random_sequence(int n, int k, Rng& rng);

// Run Algorithm 1 on a dataset whose metadata must match (n, k). Throws
// std::invalid_argument for mismatched metadata or for full mode without a
// known curvature; strict bucket policy propagates InsufficientSamplesError.
AlgoOutcome sequencing_from_samples(const Dataset& ds, int n, int k,
                                    const AlgoConfig& cfg);

// One CSV row per outcome: branch, curvature, alpha, both Case A sides, the
// delta_tilde total along pi_s, both Case B sides, and the sequence.
std::string outcome_csv_header();
std::string outcome_csv_row(const AlgoOutcome& out);
void save_outcome_csv(const AlgoOutcome& out, const std::string& path);

}  // namespace seqsub
