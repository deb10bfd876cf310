#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqsub/algorithm.hpp"
#include "seqsub/core.hpp"
#include "seqsub/sampling.hpp"

// Reproducible end-to-end experiments: generate an instance, sample datasets
// for a list of seeds, run the learner on each, and score against the
// brute-force optimum. Identical configs produce byte-identical results CSVs.

namespace seqsub {

struct ExperimentConfig {
  InstanceRecord instance;
  ObservationModel model;
  std::size_t m = 0;
  std::vector<std::uint64_t> seeds;

  // Curvature fed to the case split and the bound: a number, or measured from
  // the instance by the oracle when measure_curvature is true.
  std::optional<double> curvature;
  bool measure_curvature = false;

  bool matching_only = false;
  BucketPolicy policy = BucketPolicy::kStrict;

  // A RandomFallback row is scored as the mean objective over this many
  // uniform sequences (the returned sequence is one draw; the guarantee is in
  // expectation).
  int fallback_draws = 200;

  // Pass requirement for the summary: min ratio >= ratio_threshold when set,
  // else min ratio >= theoretical bound - bound_slack.
  std::optional<double> ratio_threshold;
  double bound_slack = 0.05;

  std::string out_csv;  // optional results path; empty = caller decides
};

// JSON round trip for config files; parsing rejects unknown fields so typos
// fail loudly.
ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

struct ResultRow {
  std::uint64_t seed = 0;
  Branch branch = Branch::kCaseA;
  Sequence sequence;
  double f_algo = 0.0;  // exact objective of the output (fallback: mean over draws)
  double f_opt = 0.0;
  double ratio = 0.0;
  double bound = 0.0;  // max{(1-c)^2, alpha(1-c)/(1+c-c^2)}; (1-c)^2 matching-only
  double alpha = 0.0;
  double c = 0.0;
  std::size_t m = 0;
  std::size_t min_bucket = 0;
};

struct ExperimentSummary {
  std::size_t rows = 0;
  double min_ratio = 0.0;
  double mean_ratio = 0.0;
  double bound = 0.0;
  double required = 0.0;  // the effective pass threshold
  bool pass = false;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  ExperimentSummary summary;
};

// Runs every seed in order. Throws std::invalid_argument on bad configs and
// propagates InsufficientSamplesError under the strict bucket policy.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string results_csv_header();
std::string result_row_csv(const ResultRow& row);
void save_results_csv(const ExperimentResult& result, const std::string& path);
std::string summary_line(const ExperimentSummary& summary);

}  // namespace seqsub
