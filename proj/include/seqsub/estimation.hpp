#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "seqsub/core.hpp"
#include "seqsub/sampling.hpp"

// Bucketing of a dataset and the plug-in estimator
//   delta_tilde(i, t) = avg(last_bucket(i, t+1)) - avg(excl_bucket(i, t)),
// where the t = 0 baseline is the known value 0 of the empty sequence, not a
// bucket average. Bucket values are kept sorted so every average is invariant
// under permutation of the dataset's records.

namespace seqsub {

// What to do when a needed bucket is empty: fail loudly, or substitute 0 for
// that bucket's average and flag the entry.
enum class BucketPolicy { kStrict, kLenient };

class BucketIndex {
 public:
  BucketIndex(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }

  // Sorted phi values; len in 1..k.
  const std::vector<double>& last_bucket(ItemId i, int len) const;
  const std::vector<double>& excl_bucket(ItemId i, int len) const;
  const std::vector<double>& full_bucket() const { return full_; }

  // Bucket means from the sorted values. Throw InsufficientSamplesError on an
  // empty bucket under kStrict; return 0 under kLenient.
  double last_avg(ItemId i, int len, BucketPolicy mode) const;
  double excl_avg(ItemId i, int len, BucketPolicy mode) const;
  double full_avg(BucketPolicy mode) const;

 private:
  friend BucketIndex build_buckets(const Dataset& ds);

  std::size_t slot(ItemId i, int len) const;
  void finalize();  // sort buckets, precompute sums

  int n_ = 0;
  int k_ = 0;
  std::vector<std::vector<double>> last_;  // index i*k + (len-1)
  std::vector<std::vector<double>> excl_;
  std::vector<double> full_;
  std::vector<double> last_sum_;
  std::vector<double> excl_sum_;
  double full_sum_ = 0.0;
};

// Single pass over the records: a record of length len lands in
// last(last item, len), in excl(i, len) for every absent item i, and in the
// full bucket when len = k.
BucketIndex build_buckets(const Dataset& ds);

// Estimated marginal contribution of item i at slot t (0-based). Strict mode
// names the offending empty bucket in the error.
double delta_tilde(const BucketIndex& bi, ItemId i, int t, BucketPolicy mode);

// All n*k estimates plus the sizes of the buckets behind each one. For t = 0
// the baseline is analytic, so n_excl is recorded as 0 and never flags.
struct DeltaMatrix {
  int n = 0;
  int k = 0;
  std::vector<double> values;        // index i*k + t
  std::vector<std::size_t> n_last;   // size of last(i, t+1)
  std::vector<std::size_t> n_excl;   // size of excl(i, t); 0 when t = 0
  std::vector<bool> flagged;         // an empty supporting bucket was hit

  double at(ItemId i, int t) const;
  bool flagged_at(ItemId i, int t) const;
};

DeltaMatrix delta_tilde_matrix(const BucketIndex& bi, BucketPolicy mode);

// Mean of the full bucket (the length-k records), i.e. avg(Phi_k).
double avg_full(const BucketIndex& bi, BucketPolicy mode);

// Hoeffding accounting for the buckets the estimator consumes: last(i, 1..k),
// excl(i, 1..k-1), and the full bucket. For epsilon = delta/(2n^2) and value
// range `range` (default delta), a bucket of size N fails to be epsilon-close
// to its mean with probability at most 2*exp(-2*N*epsilon^2/range^2); N = 0
// leaves the vacuous bound 2.
struct BucketReportEntry {
  std::string bucket;  // human-readable name, e.g. "last(i=2,len=1)"
  std::size_t size = 0;
  double failure_bound = 2.0;
};

struct ConcentrationReport {
  double delta = 0.0;
  double epsilon = 0.0;
  double range = 0.0;
  double target_failure = 0.0;
  std::size_t min_bucket_size = 0;
  double max_failure_bound = 2.0;
  bool all_meet_target = false;
  std::vector<BucketReportEntry> entries;
};

ConcentrationReport concentration_report(const BucketIndex& bi, double delta,
                                         double target_failure,
                                         std::optional<double> range = std::nullopt);

// CSV with header item,slot,delta_tilde,n_last_bucket,n_excl_bucket,flagged.
void save_delta_matrix_csv(const DeltaMatrix& dm, const std::string& path);

}  // namespace seqsub
