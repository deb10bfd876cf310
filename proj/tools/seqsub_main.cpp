// Command-line harness: generate instances, sample datasets, estimate
// marginal contributions, solve the position-assignment problem, run the full
// algorithm, and drive multi-seed experiments.
//
// Exit codes: 0 success / experiment passed, 1 experiment bound violated,
// 2 configuration or usage error, 3 insufficient samples for strict
// estimation.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "seqsub/algorithm.hpp"
#include "seqsub/assignment.hpp"
#include "seqsub/estimation.hpp"
#include "seqsub/experiment.hpp"
#include "seqsub/functions.hpp"
#include "seqsub/oracle.hpp"
#include "seqsub/sampling.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitBoundViolated = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitInsufficientSamples = 3;

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

seqsub::ObservationModel parse_model(const std::string& name, double noise_b) {
  if (name == "exact") return seqsub::ObservationModel::exact();
  if (name == "bernoulli") return seqsub::ObservationModel::bernoulli();
  if (name == "bounded-noise") return seqsub::ObservationModel::bounded_noise(noise_b);
  throw std::invalid_argument("unknown model '" + name +
                              "' (expected exact, bernoulli, or bounded-noise)");
}

std::string sequence_text(const seqsub::Sequence& seq) {
  std::string text;
  for (int j = 0; j < seq.size(); ++j) {
    if (j > 0) text += ' ';
    text += std::to_string(seq.at(j));
  }
  return text;
}

struct GenArgs {
  std::string family;
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  double weight_low = 0.1;
  double weight_high = 1.0;
  std::vector<double> weights;
  int universe = 10;
  double density = 0.5;
  int clients = 8;
  std::string base_path;  // patience-scaled: instance file of the base
  std::vector<double> scales;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  seqsub::Instance inst = [&] {
    if (a.family == seqsub::kFamilyModular) {
      if (!a.weights.empty()) {
        return seqsub::make_modular_instance(a.n, a.k, a.weights);
      }
      return seqsub::make_modular_instance(a.n, a.k, a.weight_low, a.weight_high, a.seed);
    }
    if (a.family == seqsub::kFamilyCoverage) {
      return seqsub::make_coverage_instance(a.n, a.k, a.universe, a.density, a.seed);
    }
    if (a.family == seqsub::kFamilyFacility) {
      return seqsub::make_facility_instance(a.n, a.k, a.clients, a.seed);
    }
    if (a.family == seqsub::kFamilyPatienceScaled) {
      if (a.base_path.empty()) {
        throw std::invalid_argument("patience-scaled needs --base <instance file>");
      }
      const seqsub::Instance base = seqsub::load_instance(a.base_path);
      return seqsub::make_patience_scaled_instance(*base.record, a.k, a.scales);
    }
    throw std::invalid_argument("unknown family '" + a.family + "'");
  }();
  seqsub::save_instance(inst, a.out);
  std::cout << "wrote " << a.out << " (family=" << inst.record->family
            << " n=" << inst.n() << " k=" << inst.k << ")\n";
  return kExitPass;
}

int cmd_sample(const std::string& instance_path, const std::string& model_name,
               double noise_b, std::size_t m, std::uint64_t seed,
               const std::string& out) {
  const seqsub::Instance inst = seqsub::load_instance(instance_path);
  const seqsub::ObservationModel model = parse_model(model_name, noise_b);
  const seqsub::Dataset ds = seqsub::build_dataset(inst, model, m, seed);
  seqsub::save_dataset(ds, out);
  std::cout << "wrote " << out << " (n=" << ds.n << " k=" << ds.k
            << " m=" << ds.records.size() << " delta=" << format_real(ds.delta)
            << ")\n";
  return kExitPass;
}

int cmd_estimate(const std::string& dataset_path, const std::string& policy,
                 const std::string& out, std::optional<double> target,
                 std::optional<double> delta_override) {
  const seqsub::Dataset ds = seqsub::load_dataset(dataset_path);
  const seqsub::BucketIndex bi = seqsub::build_buckets(ds);
  const seqsub::BucketPolicy mode = policy == "lenient"
                                        ? seqsub::BucketPolicy::kLenient
                                        : seqsub::BucketPolicy::kStrict;
  const seqsub::DeltaMatrix dm = seqsub::delta_tilde_matrix(bi, mode);
  if (!out.empty()) {
    seqsub::save_delta_matrix_csv(dm, out);
    std::cout << "wrote " << out << '\n';
  } else {
    std::cout << "item,slot,delta_tilde\n";
    for (seqsub::ItemId i = 0; i < dm.n; ++i) {
      for (int t = 0; t < dm.k; ++t) {
        std::cout << i << ',' << t << ',' << format_real(dm.at(i, t)) << '\n';
      }
    }
  }
  if (target.has_value()) {
    const double delta = seqsub::delta_bound(ds, delta_override);
    const auto report = seqsub::concentration_report(bi, delta, *target);
    std::cout << "concentration: delta=" << format_real(report.delta)
              << " epsilon=" << format_real(report.epsilon)
              << " min_bucket=" << report.min_bucket_size
              << " max_failure_bound=" << format_real(report.max_failure_bound)
              << (report.all_meet_target ? " MEETS" : " MISSES") << " target "
              << format_real(*target) << '\n';
  }
  return kExitPass;
}

int cmd_solve(const std::string& dataset_path, const std::string& policy) {
  const seqsub::Dataset ds = seqsub::load_dataset(dataset_path);
  const seqsub::BucketIndex bi = seqsub::build_buckets(ds);
  const seqsub::BucketPolicy mode = policy == "lenient"
                                        ? seqsub::BucketPolicy::kLenient
                                        : seqsub::BucketPolicy::kStrict;
  const seqsub::DeltaMatrix dm = seqsub::delta_tilde_matrix(bi, mode);
  const seqsub::Assignment a = seqsub::solve_P1(dm);
  std::cout << "sequence: " << sequence_text(seqsub::assignment_to_sequence(a))
            << "\ntotal_weight: " << format_real(a.total_weight) << '\n';
  return kExitPass;
}

int cmd_run(const std::string& dataset_path, std::optional<double> c,
            bool matching_only, std::uint64_t seed, const std::string& policy,
            const std::string& instance_path, const std::string& out) {
  const seqsub::Dataset ds = seqsub::load_dataset(dataset_path);
  seqsub::AlgoConfig cfg;
  cfg.curvature = c;
  cfg.mode = matching_only ? seqsub::AlgoMode::kMatchingOnly : seqsub::AlgoMode::kFull;
  cfg.fallback_seed = seed;
  cfg.policy = policy == "lenient" ? seqsub::BucketPolicy::kLenient
                                   : seqsub::BucketPolicy::kStrict;
  const seqsub::AlgoOutcome outcome =
      seqsub::sequencing_from_samples(ds, ds.n, ds.k, cfg);

  std::cout << seqsub::outcome_csv_header() << '\n'
            << seqsub::outcome_csv_row(outcome) << '\n';
  if (!out.empty()) {
    seqsub::save_outcome_csv(outcome, out);
    std::cout << "wrote " << out << '\n';
  }

  if (!instance_path.empty()) {
    const seqsub::Instance inst = seqsub::load_instance(instance_path);
    const seqsub::OracleResult opt = seqsub::brute_force_optimal(inst);
    const double f_algo = seqsub::sequence_value(inst, outcome.sequence);
    std::cout << "f_algo=" << format_real(f_algo)
              << " f_opt=" << format_real(opt.optimum_value)
              << " ratio=" << format_real(f_algo / opt.optimum_value) << '\n';
  }
  return kExitPass;
}

int cmd_experiment(const std::string& config_path, std::string out) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config '" + config_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const seqsub::ExperimentConfig cfg = seqsub::experiment_config_from_json(buf.str());
  const seqsub::ExperimentResult result = seqsub::run_experiment(cfg);

  if (out.empty()) out = cfg.out_csv;
  if (!out.empty()) {
    seqsub::save_results_csv(result, out);
    std::cout << "wrote " << out << '\n';
  } else {
    std::cout << seqsub::results_csv_header() << '\n';
    for (const seqsub::ResultRow& row : result.rows) {
      std::cout << seqsub::result_row_csv(row) << '\n';
    }
  }
  std::cout << seqsub::summary_line(result.summary) << '\n';
  return result.summary.pass ? kExitPass : kExitBoundViolated;
}

int cmd_curvature(const std::string& instance_path) {
  const seqsub::Instance inst = seqsub::load_instance(instance_path);
  const double c = seqsub::measure_instance_curvature(inst);
  std::cout << format_real(c) << '\n';
  return kExitPass;
}

int cmd_alpha(int n, int k) {
  std::cout << format_real(seqsub::compute_alpha(n, k)) << '\n';
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequencing-from-samples toolkit"};
  app.require_subcommand(1);

  // gen
  GenArgs gen;
  CLI::App* sub_gen = app.add_subcommand("gen", "Generate an instance file");
  sub_gen->add_option("--family", gen.family, "modular | coverage | facility | patience-scaled")
      ->required();
  sub_gen->add_option("--n", gen.n, "ground set size")->required();
  sub_gen->add_option("--k", gen.k, "sequence length")->required();
  sub_gen->add_option("--seed", gen.seed, "generator seed");
  sub_gen->add_option("--weight-low", gen.weight_low, "modular: weight range low");
  sub_gen->add_option("--weight-high", gen.weight_high, "modular: weight range high");
  sub_gen->add_option("--weights", gen.weights, "modular: explicit weights");
  sub_gen->add_option("--universe", gen.universe, "coverage: universe size");
  sub_gen->add_option("--density", gen.density, "coverage: cover probability");
  sub_gen->add_option("--clients", gen.clients, "facility: client count");
  sub_gen->add_option("--base", gen.base_path, "patience-scaled: base instance file");
  sub_gen->add_option("--scales", gen.scales, "patience-scaled: per-position scales");
  sub_gen->add_option("--out", gen.out, "output instance file")->required();

  // sample
  std::string smp_instance, smp_model = "exact", smp_out;
  double smp_noise = 0.0;
  std::size_t smp_m = 0;
  std::uint64_t smp_seed = 0;
  CLI::App* sub_sample = app.add_subcommand("sample", "Sample a dataset from an instance");
  sub_sample->add_option("--instance", smp_instance, "instance file")->required();
  sub_sample->add_option("--model", smp_model, "exact | bernoulli | bounded-noise");
  sub_sample->add_option("--noise", smp_noise, "bounded-noise half-width b");
  sub_sample->add_option("--m", smp_m, "sample count")->required();
  sub_sample->add_option("--seed", smp_seed, "sampling seed");
  sub_sample->add_option("--out", smp_out, "output dataset file")->required();

  // estimate
  std::string est_dataset, est_policy = "strict", est_out;
  std::optional<double> est_target, est_delta_override;
  CLI::App* sub_estimate =
      app.add_subcommand("estimate", "Estimate marginal contributions from a dataset");
  sub_estimate->add_option("--dataset", est_dataset, "dataset file")->required();
  sub_estimate->add_option("--policy", est_policy, "strict | lenient");
  sub_estimate->add_option("--out", est_out, "output CSV (default: stdout)");
  sub_estimate->add_option("--target", est_target,
                           "report Hoeffding bounds against this failure probability");
  sub_estimate->add_option("--delta-override", est_delta_override,
                           "use this value bound instead of the observed max");

  // solve
  std::string slv_dataset, slv_policy = "strict";
  CLI::App* sub_solve =
      app.add_subcommand("solve", "Solve the position assignment from a dataset");
  sub_solve->add_option("--dataset", slv_dataset, "dataset file")->required();
  sub_solve->add_option("--policy", slv_policy, "strict | lenient");

  // run
  std::string run_dataset, run_policy = "strict", run_instance, run_out;
  std::optional<double> run_c;
  bool run_matching_only = false;
  std::uint64_t run_seed = 0;
  CLI::App* sub_run = app.add_subcommand("run", "Run the full algorithm on a dataset");
  sub_run->add_option("--dataset", run_dataset, "dataset file")->required();
  sub_run->add_option("--c", run_c, "known curvature in [0,1]");
  sub_run->add_flag("--matching-only", run_matching_only,
                    "skip the case split; always return the matching sequence");
  sub_run->add_option("--seed", run_seed, "fallback draw seed");
  sub_run->add_option("--policy", run_policy, "strict | lenient");
  sub_run->add_option("--instance", run_instance,
                      "instance file; adds exact ratio columns via the oracle");
  sub_run->add_option("--out", run_out, "also write the outcome CSV here");

  // experiment
  std::string exp_config, exp_out;
  CLI::App* sub_experiment =
      app.add_subcommand("experiment", "Run a multi-seed experiment from a config file");
  sub_experiment->add_option("--config", exp_config, "experiment config JSON")->required();
  sub_experiment->add_option("--out", exp_out, "results CSV path (overrides config)");

  // curvature
  std::string cur_instance;
  CLI::App* sub_curvature =
      app.add_subcommand("curvature", "Measure an instance's curvature");
  sub_curvature->add_option("--instance", cur_instance, "instance file")->required();

  // alpha
  int alpha_n = 0, alpha_k = 0;
  CLI::App* sub_alpha = app.add_subcommand("alpha", "Print alpha for (n, k)");
  sub_alpha->add_option("--n", alpha_n, "ground set size")->required();
  sub_alpha->add_option("--k", alpha_k, "sequence length")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfigError;
  }

  try {
    if (sub_gen->parsed()) return cmd_gen(gen);
    if (sub_sample->parsed()) {
      return cmd_sample(smp_instance, smp_model, smp_noise, smp_m, smp_seed, smp_out);
    }
    if (sub_estimate->parsed()) {
      return cmd_estimate(est_dataset, est_policy, est_out, est_target,
                          est_delta_override);
    }
    if (sub_solve->parsed()) return cmd_solve(slv_dataset, slv_policy);
    if (sub_run->parsed()) {
      return cmd_run(run_dataset, run_c, run_matching_only, run_seed, run_policy,
                     run_instance, run_out);
    }
    if (sub_experiment->parsed()) return cmd_experiment(exp_config, exp_out);
    if (sub_curvature->parsed()) return cmd_curvature(cur_instance);
    if (sub_alpha->parsed()) return cmd_alpha(alpha_n, alpha_k);
  } catch (const seqsub::InsufficientSamplesError& e) {
    std::cerr << "error (insufficient samples): " << e.what() << '\n';
    return kExitInsufficientSamples;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error (configuration): " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}
