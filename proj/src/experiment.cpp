#include "seqsub/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "seqsub/functions.hpp"
#include "seqsub/oracle.hpp"

namespace seqsub {
namespace {

using nlohmann::json;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// Salt for the stream that scores a fallback row; distinct from every dataset
// stream by construction (dataset streams use the seed directly).
constexpr std::uint64_t kFallbackScoreSalt = 0x9e3779b97f4a7c15ULL;

ObservationModel model_from_json(const json& j) {
  require(j.is_object() && j.contains("kind"), "model needs a 'kind' field");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "exact") return ObservationModel::exact();
  if (kind == "bernoulli") return ObservationModel::bernoulli();
  if (kind == "bounded-noise") {
    require(j.contains("b"), "bounded-noise model needs field 'b'");
    return ObservationModel::bounded_noise(j.at("b").get<double>());
  }
  throw std::invalid_argument("unknown model kind '" + kind + "'");
}

json model_to_json(const ObservationModel& model) {
  switch (model.kind) {
    case ObservationKind::kExact:
      return json{{"kind", "exact"}};
    case ObservationKind::kBernoulli:
      return json{{"kind", "bernoulli"}};
    case ObservationKind::kBoundedNoise:
      return json{{"kind", "bounded-noise"}, {"b", model.noise_half_width}};
  }
  throw std::invalid_argument("unknown observation kind");
}

}  // namespace

ExperimentConfig experiment_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid config JSON: ") + e.what());
  }
  require(j.is_object(), "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    static const char* known[] = {"instance",       "model",           "m",
                                  "seeds",          "curvature",       "matching_only",
                                  "policy",         "fallback_draws",  "ratio_threshold",
                                  "bound_slack",    "out_csv"};
    const bool ok = std::any_of(std::begin(known), std::end(known),
                                [&](const char* k) { return key == k; });
    require(ok, "unknown config field '" + key + "'");
  }
  for (const char* key : {"instance", "model", "m", "seeds"}) {
    require(j.contains(key), std::string("config missing field '") + key + "'");
  }

  ExperimentConfig cfg;
  cfg.instance = instance_record_from_json(j.at("instance").dump());
  cfg.model = model_from_json(j.at("model"));
  const long long m = j.at("m").get<long long>();
  require(m >= 1, "config needs m >= 1");
  cfg.m = static_cast<std::size_t>(m);
  cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  require(!cfg.seeds.empty(), "config needs a nonempty seed list");

  cfg.matching_only = j.value("matching_only", false);
  if (j.contains("curvature")) {
    const json& c = j.at("curvature");
    if (c.is_string()) {
      require(c.get<std::string>() == "measured",
              "curvature must be a number or \"measured\"");
      cfg.measure_curvature = true;
    } else {
      cfg.curvature = c.get<double>();
    }
  } else {
    require(cfg.matching_only,
            "config needs 'curvature' (number or \"measured\") unless matching_only");
    cfg.measure_curvature = true;  // still needed for the reported bound
  }

  const std::string policy = j.value("policy", std::string("strict"));
  require(policy == "strict" || policy == "lenient",
          "policy must be 'strict' or 'lenient'");
  cfg.policy = policy == "strict" ? BucketPolicy::kStrict : BucketPolicy::kLenient;

  cfg.fallback_draws = j.value("fallback_draws", 200);
  require(cfg.fallback_draws >= 1, "fallback_draws must be positive");
  if (j.contains("ratio_threshold")) {
    cfg.ratio_threshold = j.at("ratio_threshold").get<double>();
  }
  cfg.bound_slack = j.value("bound_slack", 0.05);
  require(std::isfinite(cfg.bound_slack) && cfg.bound_slack >= 0.0,
          "bound_slack must be finite and nonnegative");
  cfg.out_csv = j.value("out_csv", std::string());
  return cfg;
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["instance"] = json::parse(instance_record_to_json(cfg.instance));
  j["model"] = model_to_json(cfg.model);
  j["m"] = cfg.m;
  j["seeds"] = cfg.seeds;
  if (cfg.measure_curvature) {
    j["curvature"] = "measured";
  } else if (cfg.curvature.has_value()) {
    j["curvature"] = *cfg.curvature;
  }
  j["matching_only"] = cfg.matching_only;
  j["policy"] = cfg.policy == BucketPolicy::kStrict ? "strict" : "lenient";
  j["fallback_draws"] = cfg.fallback_draws;
  if (cfg.ratio_threshold.has_value()) j["ratio_threshold"] = *cfg.ratio_threshold;
  j["bound_slack"] = cfg.bound_slack;
  if (!cfg.out_csv.empty()) j["out_csv"] = cfg.out_csv;
  return j.dump();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const Instance inst = instance_from_record(cfg.instance);
  const int n = inst.n();
  const int k = inst.k;

  double c = 0.0;
  if (cfg.measure_curvature) {
    c = measure_instance_curvature(inst);
  } else {
    require(cfg.curvature.has_value(), "experiment needs a curvature");
    c = *cfg.curvature;
  }
  require(c >= 0.0 && c <= 1.0, "curvature must lie in [0, 1]");

  const double alpha = compute_alpha(n, k);
  const double case_a = (1.0 - c) * (1.0 - c);
  const double case_b = alpha * (1.0 - c) / (1.0 + c - c * c);
  const double bound = cfg.matching_only ? case_a : std::max(case_a, case_b);

  const OracleResult opt = brute_force_optimal(inst);
  require(opt.optimum_value > 0.0,
          "experiment needs an instance with a positive optimum");

  AlgoConfig algo;
  algo.curvature = c;
  algo.mode = cfg.matching_only ? AlgoMode::kMatchingOnly : AlgoMode::kFull;
  algo.policy = cfg.policy;

  ExperimentResult result;
  result.rows.reserve(cfg.seeds.size());
  for (const std::uint64_t seed : cfg.seeds) {
    const Dataset ds = build_dataset(inst, cfg.model, cfg.m, seed);
    algo.fallback_seed = derive_seed(seed, 1);
    const AlgoOutcome out = sequencing_from_samples(ds, n, k, algo);

    ResultRow row;
    row.seed = seed;
    row.branch = out.branch;
    row.sequence = out.sequence;
    if (out.branch == Branch::kRandomFallback) {
      // Score the branch, not the single draw: mean objective of uniform
      // sequences from an independent stream.
      Rng score_rng(derive_seed(seed, kFallbackScoreSalt));
      double total = 0.0;
      for (int d = 0; d < cfg.fallback_draws; ++d) {
        total += sequence_value(inst, random_sequence(n, k, score_rng));
      }
      row.f_algo = total / static_cast<double>(cfg.fallback_draws);
    } else {
      row.f_algo = sequence_value(inst, out.sequence);
    }
    row.f_opt = opt.optimum_value;
    row.ratio = row.f_algo / row.f_opt;
    row.bound = bound;
    row.alpha = alpha;
    row.c = c;
    row.m = cfg.m;
    row.min_bucket = out.min_bucket;
    result.rows.push_back(std::move(row));
  }

  ExperimentSummary& s = result.summary;
  s.rows = result.rows.size();
  s.min_ratio = result.rows.front().ratio;
  double total_ratio = 0.0;
  for (const ResultRow& row : result.rows) {
    s.min_ratio = std::min(s.min_ratio, row.ratio);
    total_ratio += row.ratio;
  }
  s.mean_ratio = total_ratio / static_cast<double>(result.rows.size());
  s.bound = bound;
  s.required = cfg.ratio_threshold.has_value() ? *cfg.ratio_threshold
                                               : bound - cfg.bound_slack;
  s.pass = s.min_ratio >= s.required;
  return result;
}

std::string results_csv_header() {
  return "seed,branch,sequence,f_algo,f_opt,ratio,bound,alpha,c,m,min_bucket";
}

std::string result_row_csv(const ResultRow& row) {
  std::string line;
  line += std::to_string(row.seed);
  line += ',';
  line += branch_name(row.branch);
  line += ',';
  for (int j = 0; j < row.sequence.size(); ++j) {
    if (j > 0) line += ' ';
    line += std::to_string(row.sequence.at(j));
  }
  for (double x : {row.f_algo, row.f_opt, row.ratio, row.bound, row.alpha, row.c}) {
    line += ',';
    line += format_real(x);
  }
  line += ',';
  line += std::to_string(row.m);
  line += ',';
  line += std::to_string(row.min_bucket);
  return line;
}

void save_results_csv(const ExperimentResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << results_csv_header() << '\n';
  for (const ResultRow& row : result.rows) out << result_row_csv(row) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string summary_line(const ExperimentSummary& s) {
  std::string line = "summary: rows=" + std::to_string(s.rows);
  line += " min_ratio=" + std::string(format_real(s.min_ratio));
  line += " mean_ratio=" + std::string(format_real(s.mean_ratio));
  line += " bound=" + std::string(format_real(s.bound));
  line += " required=" + std::string(format_real(s.required));
  line += s.pass ? " PASS" : " FAIL";
  return line;
}

}  // namespace seqsub
