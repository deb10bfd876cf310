#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqsub/core.hpp"
#include "seqsub/rng.hpp"

// Two-stage uniform sampling and the stochastic observation models. A sample
// is drawn by picking a length t uniformly from {1..k} and then a uniformly
// random ordered sequence of t distinct items; the observed utility phi is the
// model's noisy view of F(sequence). Lengths start at 1: the empty sequence's
// value is known to be zero and is injected analytically downstream.

namespace seqsub {

enum class ObservationKind { kExact, kBernoulli, kBoundedNoise };

// How phi relates to F(pi). All variants are unbiased: E[phi | pi] = F(pi).
struct ObservationModel {
  ObservationKind kind = ObservationKind::kExact;
  // Half-width b of the additive uniform noise on [-b, b] (BoundedNoise only).
  double noise_half_width = 0.0;
  // Declared bound on |phi| when one is known a priori (1 for Bernoulli).
  std::optional<double> value_bound;

  static ObservationModel exact() { return {}; }
  static ObservationModel bernoulli() {
    return {ObservationKind::kBernoulli, 0.0, 1.0};
  }
  static ObservationModel bounded_noise(double b) {
    return {ObservationKind::kBoundedNoise, b, std::nullopt};
  }
};

struct SampleRecord {
  Sequence sequence;  // length 1..k
  double phi = 0.0;
};

struct Dataset {
  int n = 0;
  int k = 0;
  // Value bound delta: max observed phi at build time unless overridden.
  double delta = 0.0;
  std::vector<SampleRecord> records;

  std::size_t size() const { return records.size(); }
};

// One sample: t ~ U{1..k}, sequence uniform over all ordered t-tuples of
// distinct items, phi ~ model given F(sequence). Throws std::invalid_argument
// for a Bernoulli model on an instance not flagged bernoulli_compatible.
SampleRecord draw_two_stage(const Instance& inst, const ObservationModel& model,
                            Rng& rng);

// m i.i.d. samples, deterministic given seed. The dataset's delta is the
// model's declared value bound if present, else the max observed phi.
Dataset build_dataset(const Instance& inst, const ObservationModel& model,
                      std::size_t m, std::uint64_t seed);

// override if supplied, else the max phi observed in the dataset.
double delta_bound(const Dataset& ds, std::optional<double> override_value);

// Text format: header `n,k,delta,m`, then one `t,id_1 id_2 ... id_t,phi`
// line per record; reals carry 12 significant digits and round-trip
// losslessly at that precision.
void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace seqsub
