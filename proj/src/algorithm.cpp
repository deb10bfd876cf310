#include "seqsub/algorithm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace seqsub {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::kCaseA: return "CaseA";
    case Branch::kCaseB: return "CaseB";
    case Branch::kRandomFallback: return "RandomFallback";
  }
  return "?";
}

double compute_alpha(int n, int k) {
  require(n >= 1 && k >= 1 && k <= n, "alpha needs 1 <= k <= n");
  if (n < 2 * k) return 0.0;  // an ordered k-sample cannot avoid a k-set
  double alpha = 1.0;
  for (int j = 0; j < k; ++j) {
    alpha *= static_cast<double>(n - k - j) / static_cast<double>(n - j);
  }
  return alpha;
}

Sequence random_sequence(int n, int k, Rng& rng) {
  require(n >= 1 && k >= 1 && k <= n, "random sequence needs 1 <= k <= n");
  std::vector<ItemId> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int j = 0; j < k; ++j) {
    const int pick = j + rng.bounded_int(n - j);
    std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(pick)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return Sequence(std::move(pool));
}

AlgoOutcome sequencing_from_samples(const Dataset& ds, int n, int k,
                                    const AlgoConfig& cfg) {
  require(ds.n == n && ds.k == k, "dataset metadata does not match (n, k)");
  require(n >= 1 && k >= 1 && k <= n, "need 1 <= k <= n");
  if (cfg.mode == AlgoMode::kFull) {
    require(cfg.curvature.has_value(),
            "full mode needs a known curvature; use matching-only mode otherwise");
  }
  if (cfg.curvature.has_value()) {
    require(std::isfinite(*cfg.curvature) && *cfg.curvature >= 0.0 &&
                *cfg.curvature <= 1.0,
            "curvature must lie in [0, 1]");
  }

  const BucketIndex bi = build_buckets(ds);
  const DeltaMatrix dm = delta_tilde_matrix(bi, cfg.policy);
  Assignment matching = solve_P1(dm);
  Sequence pi_s = assignment_to_sequence(matching);

  std::size_t min_bucket = bi.full_bucket().size();
  for (ItemId i = 0; i < n; ++i) {
    for (int len = 1; len <= k; ++len) {
      min_bucket = std::min(min_bucket, bi.last_bucket(i, len).size());
      if (len <= k - 1) min_bucket = std::min(min_bucket, bi.excl_bucket(i, len).size());
    }
  }

  AlgoOutcome out{pi_s, Branch::kCaseA, pi_s, std::move(matching), {}, min_bucket};
  out.diag.c = cfg.curvature.has_value() ? *cfg.curvature : kNan;
  out.diag.alpha = compute_alpha(n, k);
  out.diag.sum_delta_pi_s = 0.0;
  for (int t = 1; t <= k; ++t) {
    out.diag.sum_delta_pi_s += dm.at(pi_s.at(t - 1), t - 1);
  }

  if (cfg.mode == AlgoMode::kMatchingOnly) {
    const double c = out.diag.c;
    out.diag.case_a_lhs = (1.0 - c) * (1.0 - c);  // NaN when c unknown
    out.diag.case_a_rhs = out.diag.alpha * (1.0 - c) / (1.0 + c - c * c);
    out.diag.case_b_lhs = (1.0 - c) * out.diag.sum_delta_pi_s;
    out.diag.avg_phi_k = kNan;  // never consulted in this mode
    return out;
  }

  const double c = *cfg.curvature;
  out.diag.case_a_lhs = (1.0 - c) * (1.0 - c);
  out.diag.case_a_rhs = out.diag.alpha * (1.0 - c) / (1.0 + c - c * c);
  if (out.diag.case_a_lhs >= out.diag.case_a_rhs) {
    out.branch = Branch::kCaseA;
    out.diag.case_b_lhs = (1.0 - c) * out.diag.sum_delta_pi_s;
    out.diag.avg_phi_k = kNan;  // not evaluated on this path
    return out;
  }

  out.diag.case_b_lhs = (1.0 - c) * out.diag.sum_delta_pi_s;
  out.diag.avg_phi_k = avg_full(bi, cfg.policy);
  if (out.diag.case_b_lhs >= out.diag.avg_phi_k) {
    out.branch = Branch::kCaseB;
    return out;
  }

  Rng rng(cfg.fallback_seed);
  out.branch = Branch::kRandomFallback;
  out.sequence = random_sequence(n, k, rng);
  return out;
}

std::string outcome_csv_header() {
  return "branch,c,alpha,case_a_lhs,case_a_rhs,sum_delta_pi_s,case_b_lhs,avg_phi_k,sequence";
}

std::string outcome_csv_row(const AlgoOutcome& out) {
  std::string row;
  row += branch_name(out.branch);
  row += ',';
  row += format_real(out.diag.c);
  row += ',';
  row += format_real(out.diag.alpha);
  row += ',';
  row += format_real(out.diag.case_a_lhs);
  row += ',';
  row += format_real(out.diag.case_a_rhs);
  row += ',';
  row += format_real(out.diag.sum_delta_pi_s);
  row += ',';
  row += format_real(out.diag.case_b_lhs);
  row += ',';
  row += format_real(out.diag.avg_phi_k);
  row += ',';
  for (int j = 0; j < out.sequence.size(); ++j) {
    if (j > 0) row += ' ';
    row += std::to_string(out.sequence.at(j));
  }
  return row;
}

void save_outcome_csv(const AlgoOutcome& out, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << outcome_csv_header() << '\n' << outcome_csv_row(out) << '\n';
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace seqsub
