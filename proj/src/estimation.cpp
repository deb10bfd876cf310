#include "seqsub/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace seqsub {
namespace {

std::string bucket_name(const char* kind, ItemId i, int len) {
  return std::string(kind) + "(i=" + std::to_string(i) +
         ",len=" + std::to_string(len) + ")";
}

double mean_or(const std::vector<double>& values, double sum, BucketPolicy mode,
               const std::string& name) {
  if (values.empty()) {
    if (mode == BucketPolicy::kStrict) {
      throw InsufficientSamplesError("empty bucket " + name);
    }
    return 0.0;
  }
  return sum / static_cast<double>(values.size());
}

}  // namespace

BucketIndex::BucketIndex(int n, int k) : n_(n), k_(k) {
  if (n < 1 || k < 1 || k > n) {
    throw std::invalid_argument("bucket index needs 1 <= k <= n");
  }
  const std::size_t cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(k);
  last_.assign(cells, {});
  excl_.assign(cells, {});
  last_sum_.assign(cells, 0.0);
  excl_sum_.assign(cells, 0.0);
}

std::size_t BucketIndex::slot(ItemId i, int len) const {
  if (i < 0 || i >= n_ || len < 1 || len > k_) {
    throw std::invalid_argument("bucket index out of range");
  }
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(k_) +
         static_cast<std::size_t>(len - 1);
}

const std::vector<double>& BucketIndex::last_bucket(ItemId i, int len) const {
  return last_[slot(i, len)];
}

const std::vector<double>& BucketIndex::excl_bucket(ItemId i, int len) const {
  return excl_[slot(i, len)];
}

double BucketIndex::last_avg(ItemId i, int len, BucketPolicy mode) const {
  const std::size_t s = slot(i, len);
  return mean_or(last_[s], last_sum_[s], mode, bucket_name("last", i, len));
}

double BucketIndex::excl_avg(ItemId i, int len, BucketPolicy mode) const {
  const std::size_t s = slot(i, len);
  return mean_or(excl_[s], excl_sum_[s], mode, bucket_name("excl", i, len));
}

double BucketIndex::full_avg(BucketPolicy mode) const {
  return mean_or(full_, full_sum_, mode, "full");
}

void BucketIndex::finalize() {
  // Sorting before summing makes every mean independent of record order.
  for (std::size_t s = 0; s < last_.size(); ++s) {
    std::sort(last_[s].begin(), last_[s].end());
    last_sum_[s] = std::accumulate(last_[s].begin(), last_[s].end(), 0.0);
    std::sort(excl_[s].begin(), excl_[s].end());
    excl_sum_[s] = std::accumulate(excl_[s].begin(), excl_[s].end(), 0.0);
  }
  std::sort(full_.begin(), full_.end());
  full_sum_ = std::accumulate(full_.begin(), full_.end(), 0.0);
}

BucketIndex build_buckets(const Dataset& ds) {
  if (ds.records.empty()) throw std::invalid_argument("dataset has no records");
  BucketIndex bi(ds.n, ds.k);

  std::vector<char> present(static_cast<std::size_t>(ds.n), 0);
  for (const SampleRecord& rec : ds.records) {
    const int len = rec.sequence.size();
    const ItemId last_item = rec.sequence.at(len - 1);
    bi.last_[bi.slot(last_item, len)].push_back(rec.phi);
    for (int j = 0; j < len; ++j) present[static_cast<std::size_t>(rec.sequence.at(j))] = 1;
    for (ItemId i = 0; i < ds.n; ++i) {
      if (!present[static_cast<std::size_t>(i)]) {
        bi.excl_[bi.slot(i, len)].push_back(rec.phi);
      }
    }
    for (int j = 0; j < len; ++j) present[static_cast<std::size_t>(rec.sequence.at(j))] = 0;
    if (len == ds.k) bi.full_.push_back(rec.phi);
  }
  bi.finalize();
  return bi;
}

double delta_tilde(const BucketIndex& bi, ItemId i, int t, BucketPolicy mode) {
  if (t < 0 || t >= bi.k()) throw std::invalid_argument("slot t must lie in 0..k-1");
  const double last_part = bi.last_avg(i, t + 1, mode);
  const double excl_part = t == 0 ? 0.0 : bi.excl_avg(i, t, mode);
  return last_part - excl_part;
}

double DeltaMatrix::at(ItemId i, int t) const {
  return values.at(static_cast<std::size_t>(i) * static_cast<std::size_t>(k) +
                   static_cast<std::size_t>(t));
}

bool DeltaMatrix::flagged_at(ItemId i, int t) const {
  return flagged.at(static_cast<std::size_t>(i) * static_cast<std::size_t>(k) +
                    static_cast<std::size_t>(t));
}

DeltaMatrix delta_tilde_matrix(const BucketIndex& bi, BucketPolicy mode) {
  DeltaMatrix dm;
  dm.n = bi.n();
  dm.k = bi.k();
  const std::size_t cells =
      static_cast<std::size_t>(dm.n) * static_cast<std::size_t>(dm.k);
  dm.values.assign(cells, 0.0);
  dm.n_last.assign(cells, 0);
  dm.n_excl.assign(cells, 0);
  dm.flagged.assign(cells, false);

  for (ItemId i = 0; i < dm.n; ++i) {
    for (int t = 0; t < dm.k; ++t) {
      const std::size_t cell = static_cast<std::size_t>(i) *
                                   static_cast<std::size_t>(dm.k) +
                               static_cast<std::size_t>(t);
      const std::size_t n_last = bi.last_bucket(i, t + 1).size();
      const std::size_t n_excl = t == 0 ? 0 : bi.excl_bucket(i, t).size();
      dm.n_last[cell] = n_last;
      dm.n_excl[cell] = n_excl;
      dm.flagged[cell] = n_last == 0 || (t > 0 && n_excl == 0);
      dm.values[cell] = delta_tilde(bi, i, t, mode);
    }
  }
  return dm;
}

double avg_full(const BucketIndex& bi, BucketPolicy mode) {
  return bi.full_avg(mode);
}

ConcentrationReport concentration_report(const BucketIndex& bi, double delta,
                                         double target_failure,
                                         std::optional<double> range) {
  ConcentrationReport report;
  report.delta = delta;
  report.range = range.value_or(delta);
  report.target_failure = target_failure;
  const double n = static_cast<double>(bi.n());
  report.epsilon = delta / (2.0 * n * n);

  const bool usable = report.epsilon > 0.0 && report.range > 0.0;
  const double rate =
      usable ? 2.0 * (report.epsilon / report.range) * (report.epsilon / report.range)
             : 0.0;
  auto bound_for = [&](std::size_t size) {
    return 2.0 * std::exp(-rate * static_cast<double>(size));
  };
  auto add = [&](std::string name, std::size_t size) {
    report.entries.push_back(BucketReportEntry{std::move(name), size, bound_for(size)});
  };

  for (ItemId i = 0; i < bi.n(); ++i) {
    for (int len = 1; len <= bi.k(); ++len) add(bucket_name("last", i, len), bi.last_bucket(i, len).size());
    for (int len = 1; len <= bi.k() - 1; ++len) add(bucket_name("excl", i, len), bi.excl_bucket(i, len).size());
  }
  add("full", bi.full_bucket().size());

  report.min_bucket_size = report.entries.front().size;
  report.max_failure_bound = 0.0;
  for (const BucketReportEntry& e : report.entries) {
    report.min_bucket_size = std::min(report.min_bucket_size, e.size);
    report.max_failure_bound = std::max(report.max_failure_bound, e.failure_bound);
  }
  report.all_meet_target = report.max_failure_bound <= target_failure;
  return report;
}

void save_delta_matrix_csv(const DeltaMatrix& dm, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "item,slot,delta_tilde,n_last_bucket,n_excl_bucket,flagged\n";
  char buf[64];
  for (ItemId i = 0; i < dm.n; ++i) {
    for (int t = 0; t < dm.k; ++t) {
      const std::size_t cell = static_cast<std::size_t>(i) *
                                   static_cast<std::size_t>(dm.k) +
                               static_cast<std::size_t>(t);
      std::snprintf(buf, sizeof buf, "%.12g", dm.values[cell]);
      out << i << ',' << t << ',' << buf << ',' << dm.n_last[cell] << ','
          << dm.n_excl[cell] << ',' << (dm.flagged[cell] ? 1 : 0) << '\n';
    }
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace seqsub
