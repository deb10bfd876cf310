#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "seqsub/core.hpp"

// Concrete monotone submodular families with controllable curvature, seeded
// instance generators, and the instance record format. A record stores the
// generator recipe (family, sizes, parameters, seed), so loading a record
// regenerates the instance byte for byte.

namespace seqsub {

// Sum of per-item weights. Curvature exactly 0.
class ModularFunction : public SetFunction {
 public:
  explicit ModularFunction(std::vector<double> weights);

  Utility eval(std::span<const ItemId> items) const override;
  int ground_size() const override { return static_cast<int>(weights_.size()); }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// Weight of the universe elements covered by the union of the chosen items'
// cover sets.
class WeightedCoverageFunction : public SetFunction {
 public:
  WeightedCoverageFunction(int n_items, std::vector<double> universe_weights,
                           std::vector<std::vector<int>> cover_sets);

  Utility eval(std::span<const ItemId> items) const override;
  int ground_size() const override { return n_items_; }
  int universe_size() const { return static_cast<int>(universe_weights_.size()); }
  const std::vector<std::vector<int>>& cover_sets() const { return cover_sets_; }

 private:
  int n_items_;
  std::vector<double> universe_weights_;
  std::vector<std::vector<int>> cover_sets_;
  std::vector<std::vector<std::uint64_t>> item_masks_;  // per item, universe bitmask
  std::size_t blocks_ = 0;
};

// Sum over clients of their best affinity among the chosen items.
class FacilityLocationFunction : public SetFunction {
 public:
  // affinity[client][item], all entries nonnegative.
  explicit FacilityLocationFunction(std::vector<std::vector<double>> affinity);

  Utility eval(std::span<const ItemId> items) const override;
  int ground_size() const override { return n_items_; }
  int client_count() const { return static_cast<int>(affinity_.size()); }

 private:
  int n_items_;
  std::vector<std::vector<double>> affinity_;
};

// factor * base(S). Positive scaling preserves monotonicity, submodularity,
// and curvature.
class ScaledFunction : public SetFunction {
 public:
  ScaledFunction(std::shared_ptr<const SetFunction> base, double factor);

  Utility eval(std::span<const ItemId> items) const override;
  int ground_size() const override { return base_->ground_size(); }
  double factor() const { return factor_; }

 private:
  std::shared_ptr<const SetFunction> base_;
  double factor_;
};

// --- Generators -----------------------------------------------------------

// k identical modular functions with i.i.d. weights from [weight_low,
// weight_high). curvature_hint = 0.
Instance make_modular_instance(int n, int k, double weight_low, double weight_high,
                               std::uint64_t seed);

// Modular instance with explicit weights (no randomness).
Instance make_modular_instance(int n, int k, std::vector<double> weights);

// k independent coverage functions; each item covers each universe element
// with probability density, element weights i.i.d. uniform [0,1). Curvature
// left unset; measure it with the oracle.
Instance make_coverage_instance(int n, int k, int universe_size, double density,
                                std::uint64_t seed);

// k independent facility-location functions with i.i.d. uniform affinities.
Instance make_facility_instance(int n, int k, int n_clients, std::uint64_t seed);

// f_t = scales[t-1] * g where g is the base instance's first function
// normalized to [0,1] by its full-set value. Requires sum(scales) <= 1, which
// caps F at 1 and makes the instance Bernoulli-compatible.
Instance make_patience_scaled_instance(const InstanceRecord& base, int k,
                                       std::vector<double> scales);

// --- Records and serialization --------------------------------------------

inline constexpr const char* kFamilyModular = "modular";
inline constexpr const char* kFamilyCoverage = "coverage";
inline constexpr const char* kFamilyFacility = "facility";
inline constexpr const char* kFamilyPatienceScaled = "patience-scaled";

// Rebuild the instance a record describes. Deterministic: equal records give
// equal instances.
Instance instance_from_record(const InstanceRecord& rec);

std::string instance_record_to_json(const InstanceRecord& rec);
InstanceRecord instance_record_from_json(const std::string& text);

// File forms of the above. save_instance refuses instances that carry no
// record (hand-built ones are not reproducible from a file).
void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace seqsub
