#include "seqsub/functions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

#include "seqsub/rng.hpp"

namespace seqsub {
namespace {

using nlohmann::json;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require_finite_nonneg(double x, const std::string& what) {
  require(std::isfinite(x) && x >= 0.0, what + " must be finite and nonnegative");
}

}  // namespace

// --- ModularFunction -------------------------------------------------------

ModularFunction::ModularFunction(std::vector<double> weights)
    : weights_(std::move(weights)) {
  require(!weights_.empty(), "modular function needs at least one weight");
  for (double w : weights_) require_finite_nonneg(w, "modular weight");
}

Utility ModularFunction::eval(std::span<const ItemId> items) const {
  double total = 0.0;
  for (ItemId id : items) total += weights_.at(static_cast<std::size_t>(id));
  return total;
}

// --- WeightedCoverageFunction -----------------------------------------------

WeightedCoverageFunction::WeightedCoverageFunction(
    int n_items, std::vector<double> universe_weights,
    std::vector<std::vector<int>> cover_sets)
    : n_items_(n_items),
      universe_weights_(std::move(universe_weights)),
      cover_sets_(std::move(cover_sets)) {
  require(n_items_ >= 1, "coverage function needs at least one item");
  require(!universe_weights_.empty(), "coverage universe must be nonempty");
  require(static_cast<int>(cover_sets_.size()) == n_items_,
          "coverage needs one cover set per item");
  const int universe = static_cast<int>(universe_weights_.size());
  for (double w : universe_weights_) require_finite_nonneg(w, "universe weight");
  blocks_ = static_cast<std::size_t>((universe + 63) / 64);
  item_masks_.assign(static_cast<std::size_t>(n_items_),
                     std::vector<std::uint64_t>(blocks_, 0));
  for (int i = 0; i < n_items_; ++i) {
    for (int e : cover_sets_[static_cast<std::size_t>(i)]) {
      require(e >= 0 && e < universe, "cover set element out of range");
      item_masks_[static_cast<std::size_t>(i)][static_cast<std::size_t>(e) / 64] |=
          std::uint64_t{1} << (static_cast<unsigned>(e) % 64);
    }
  }
}

Utility WeightedCoverageFunction::eval(std::span<const ItemId> items) const {
  if (items.empty()) return 0.0;
  std::vector<std::uint64_t> covered(blocks_, 0);
  for (ItemId id : items) {
    const auto& mask = item_masks_.at(static_cast<std::size_t>(id));
    for (std::size_t b = 0; b < blocks_; ++b) covered[b] |= mask[b];
  }
  double total = 0.0;
  for (std::size_t b = 0; b < blocks_; ++b) {
    std::uint64_t bits = covered[b];
    while (bits != 0) {
      const unsigned bit = static_cast<unsigned>(std::countr_zero(bits));
      total += universe_weights_[b * 64 + bit];
      bits &= bits - 1;
    }
  }
  return total;
}

// --- FacilityLocationFunction ------------------------------------------------

FacilityLocationFunction::FacilityLocationFunction(
    std::vector<std::vector<double>> affinity)
    : affinity_(std::move(affinity)) {
  require(!affinity_.empty(), "facility location needs at least one client");
  n_items_ = static_cast<int>(affinity_.front().size());
  require(n_items_ >= 1, "facility location needs at least one item");
  for (const auto& row : affinity_) {
    require(static_cast<int>(row.size()) == n_items_,
            "affinity rows must all have one entry per item");
    for (double a : row) require_finite_nonneg(a, "affinity");
  }
}

Utility FacilityLocationFunction::eval(std::span<const ItemId> items) const {
  if (items.empty()) return 0.0;
  double total = 0.0;
  for (const auto& row : affinity_) {
    double best = 0.0;
    for (ItemId id : items) best = std::max(best, row[static_cast<std::size_t>(id)]);
    total += best;
  }
  return total;
}

// --- ScaledFunction ----------------------------------------------------------

ScaledFunction::ScaledFunction(std::shared_ptr<const SetFunction> base, double factor)
    : base_(std::move(base)), factor_(factor) {
  require(base_ != nullptr, "scaled function needs a base function");
  require_finite_nonneg(factor_, "scale factor");
}

Utility ScaledFunction::eval(std::span<const ItemId> items) const {
  return factor_ * base_->eval(items);
}

// --- Generators --------------------------------------------------------------

namespace {

InstanceRecord make_record(std::string family, int n, int k, std::uint64_t seed,
                           const json& params) {
  InstanceRecord rec;
  rec.family = std::move(family);
  rec.n = n;
  rec.k = k;
  rec.seed = seed;
  rec.params_json = params.dump();
  return rec;
}

void check_sizes(int n, int k) {
  require(n >= 1, "n must be at least 1");
  require(k >= 1 && k <= n, "k must satisfy 1 <= k <= n");
}

}  // namespace

Instance make_modular_instance(int n, int k, double weight_low, double weight_high,
                               std::uint64_t seed) {
  check_sizes(n, k);
  require(std::isfinite(weight_low) && std::isfinite(weight_high) &&
              0.0 <= weight_low && weight_low <= weight_high,
          "weight range must satisfy 0 <= low <= high");
  Rng rng(seed);
  std::vector<double> weights(static_cast<std::size_t>(n));
  for (double& w : weights) w = rng.uniform(weight_low, weight_high);

  Instance inst;
  inst.ground = GroundSet{n};
  inst.k = k;
  auto f = std::make_shared<ModularFunction>(std::move(weights));
  inst.functions.assign(static_cast<std::size_t>(k), f);
  inst.curvature_hint = 0.0;
  inst.record = make_record(kFamilyModular, n, k, seed,
                            json{{"weight_low", weight_low}, {"weight_high", weight_high}});
  inst.validate();
  return inst;
}

Instance make_modular_instance(int n, int k, std::vector<double> weights) {
  check_sizes(n, k);
  require(static_cast<int>(weights.size()) == n, "need one weight per item");
  json params{{"weights", weights}};

  Instance inst;
  inst.ground = GroundSet{n};
  inst.k = k;
  auto f = std::make_shared<ModularFunction>(std::move(weights));
  inst.functions.assign(static_cast<std::size_t>(k), f);
  inst.curvature_hint = 0.0;
  inst.record = make_record(kFamilyModular, n, k, 0, params);
  inst.validate();
  return inst;
}

Instance make_coverage_instance(int n, int k, int universe_size, double density,
                                std::uint64_t seed) {
  check_sizes(n, k);
  require(universe_size >= 1, "universe_size must be at least 1");
  require(std::isfinite(density) && density > 0.0 && density <= 1.0,
          "density must lie in (0, 1]");

  Instance inst;
  inst.ground = GroundSet{n};
  inst.k = k;
  for (int t = 1; t <= k; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<double> weights(static_cast<std::size_t>(universe_size));
    for (double& w : weights) w = rng.next_unit();
    std::vector<std::vector<int>> covers(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int e = 0; e < universe_size; ++e) {
        if (rng.bernoulli(density)) covers[static_cast<std::size_t>(i)].push_back(e);
      }
    }
    inst.functions.push_back(std::make_shared<WeightedCoverageFunction>(
        n, std::move(weights), std::move(covers)));
  }
  inst.record = make_record(
      kFamilyCoverage, n, k, seed,
      json{{"universe_size", universe_size}, {"density", density}});
  inst.validate();
  return inst;
}

Instance make_facility_instance(int n, int k, int n_clients, std::uint64_t seed) {
  check_sizes(n, k);
  require(n_clients >= 1, "need at least one client");

  Instance inst;
  inst.ground = GroundSet{n};
  inst.k = k;
  for (int t = 1; t <= k; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<std::vector<double>> affinity(
        static_cast<std::size_t>(n_clients),
        std::vector<double>(static_cast<std::size_t>(n)));
    for (auto& row : affinity) {
      for (double& a : row) a = rng.next_unit();
    }
    inst.functions.push_back(
        std::make_shared<FacilityLocationFunction>(std::move(affinity)));
  }
  inst.record = make_record(kFamilyFacility, n, k, seed, json{{"clients", n_clients}});
  inst.validate();
  return inst;
}

Instance make_patience_scaled_instance(const InstanceRecord& base, int k,
                                       std::vector<double> scales) {
  require(base.family != kFamilyPatienceScaled,
          "patience-scaled instances cannot nest");
  require(static_cast<int>(scales.size()) == k, "need one scale per position");
  double total = 0.0;
  for (double q : scales) {
    require_finite_nonneg(q, "scale");
    total += q;
  }
  require(total <= 1.0 + 1e-9, "scales must sum to at most 1");

  Instance base_inst = instance_from_record(base);
  check_sizes(base_inst.n(), k);
  std::shared_ptr<const SetFunction> g = base_inst.functions.front();

  std::vector<ItemId> omega(static_cast<std::size_t>(base_inst.n()));
  for (int i = 0; i < base_inst.n(); ++i) omega[static_cast<std::size_t>(i)] = i;
  const double g_omega = g->eval(omega);
  require(g_omega > 0.0, "base function must be positive on the full ground set");

  Instance inst;
  inst.ground = base_inst.ground;
  inst.k = k;
  for (int t = 1; t <= k; ++t) {
    inst.functions.push_back(std::make_shared<ScaledFunction>(
        g, scales[static_cast<std::size_t>(t - 1)] / g_omega));
  }
  inst.curvature_hint = base_inst.curvature_hint;
  inst.bernoulli_compatible = true;
  json params{{"base", json::parse(instance_record_to_json(base))},
              {"scales", scales}};
  inst.record = make_record(kFamilyPatienceScaled, base_inst.n(), k, base.seed, params);
  inst.validate();
  return inst;
}

// --- Records and serialization ------------------------------------------------

namespace {

json record_to_json_obj(const InstanceRecord& rec) {
  json j;
  j["family"] = rec.family;
  j["n"] = rec.n;
  j["k"] = rec.k;
  j["seed"] = rec.seed;
  j["params"] = json::parse(rec.params_json.empty() ? "{}" : rec.params_json);
  return j;
}

InstanceRecord record_from_json_obj(const json& j) {
  require(j.is_object(), "instance record must be a JSON object");
  for (const char* key : {"family", "n", "k", "seed", "params"}) {
    require(j.contains(key), std::string("instance record missing field '") + key + "'");
  }
  InstanceRecord rec;
  rec.family = j.at("family").get<std::string>();
  rec.n = j.at("n").get<int>();
  rec.k = j.at("k").get<int>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  rec.params_json = j.at("params").dump();
  return rec;
}

}  // namespace

Instance instance_from_record(const InstanceRecord& rec) {
  const json params = json::parse(rec.params_json.empty() ? "{}" : rec.params_json);
  if (rec.family == kFamilyModular) {
    if (params.contains("weights")) {
      return make_modular_instance(rec.n, rec.k,
                                   params.at("weights").get<std::vector<double>>());
    }
    return make_modular_instance(rec.n, rec.k, params.at("weight_low").get<double>(),
                                 params.at("weight_high").get<double>(), rec.seed);
  }
  if (rec.family == kFamilyCoverage) {
    return make_coverage_instance(rec.n, rec.k, params.at("universe_size").get<int>(),
                                  params.at("density").get<double>(), rec.seed);
  }
  if (rec.family == kFamilyFacility) {
    return make_facility_instance(rec.n, rec.k, params.at("clients").get<int>(),
                                  rec.seed);
  }
  if (rec.family == kFamilyPatienceScaled) {
    InstanceRecord base = record_from_json_obj(params.at("base"));
    return make_patience_scaled_instance(
        base, rec.k, params.at("scales").get<std::vector<double>>());
  }
  throw std::invalid_argument("unknown instance family '" + rec.family + "'");
}

std::string instance_record_to_json(const InstanceRecord& rec) {
  return record_to_json_obj(rec).dump();
}

InstanceRecord instance_record_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid instance JSON: ") + e.what());
  }
  return record_from_json_obj(j);
}

void save_instance(const Instance& inst, const std::string& path) {
  require(inst.record.has_value(),
          "instance has no generator record; only generated instances can be saved");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << instance_record_to_json(*inst.record) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  return instance_from_record(instance_record_from_json(buf.str()));
}

}  // namespace seqsub
