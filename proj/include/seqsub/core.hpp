#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqsub {

using ItemId = std::int32_t;
using Utility = double;

// Strict estimation needed a bucket that holds no samples. The message names
// the bucket.
class InsufficientSamplesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exact-enumeration routine was asked for more work than its guard allows.
class EnumerationGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ground set of n items with dense ids 0..n-1.
struct GroundSet {
  int n = 0;

  GroundSet() = default;
  explicit GroundSet(int n_items) : n(n_items) {
    if (n < 1) throw std::invalid_argument("GroundSet: n must be >= 1");
  }
};

// Ordered list of distinct item ids. Doubles as a set via items().
class Sequence {
 public:
  Sequence() = default;
  explicit Sequence(std::vector<ItemId> items);

  int size() const { return static_cast<int>(items_.size()); }
  bool empty() const { return items_.empty(); }
  ItemId at(int pos) const { return items_.at(static_cast<std::size_t>(pos)); }
  std::span<const ItemId> items() const { return items_; }

  // First min(t, size) items.
  std::span<const ItemId> prefix(int t) const;

  bool contains(ItemId id) const;

  bool operator==(const Sequence& other) const { return items_ == other.items_; }

 private:
  std::vector<ItemId> items_;
};

// Monotone set function over item-id sets. eval receives distinct ids in any
// order and must treat them as a set; eval of the empty span is 0.
class SetFunction {
 public:
  virtual ~SetFunction() = default;
  virtual Utility eval(std::span<const ItemId> items) const = 0;
  virtual int ground_size() const = 0;
};

// Reproducibility record for a generated instance: enough to rebuild it
// byte-for-byte. params_json holds the family-specific parameters as
// canonical JSON.
struct InstanceRecord {
  std::string family;
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  std::string params_json;
};

// Problem input: n items and k monotone submodular functions f_1..f_k.
struct Instance {
  GroundSet ground;
  int k = 0;
  std::vector<std::shared_ptr<const SetFunction>> functions;  // f_1..f_k
  std::optional<double> curvature_hint;
  // Max achievable objective value is <= 1, so Bernoulli observations are
  // well defined.
  bool bernoulli_compatible = false;
  std::optional<InstanceRecord> record;

  int n() const { return ground.n; }
  const SetFunction& function(int t) const;  // t in 1..k
  void validate() const;
};

// f(S + i) - f(S). Requires i not in S.
Utility marginal(const SetFunction& f, ItemId i, std::span<const ItemId> s);

// Objective of a (possibly short) sequence:
//   sum over j = 1..k of f_j(first min(j, |pi|) items of pi).
// Customers with patience beyond |pi| see the whole sequence; the empty
// sequence evaluates to 0.
Utility sequence_value(const Instance& inst, const Sequence& pi);

}  // namespace seqsub
