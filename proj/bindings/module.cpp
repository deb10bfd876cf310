// Python bindings for the sequencing-from-samples library: instance
// generation, two-stage sampling, estimation, the assignment solver, the full
// algorithm, the exact oracle, and the experiment runner.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqsub/algorithm.hpp"
#include "seqsub/assignment.hpp"
#include "seqsub/core.hpp"
#include "seqsub/estimation.hpp"
#include "seqsub/experiment.hpp"
#include "seqsub/functions.hpp"
#include "seqsub/oracle.hpp"
#include "seqsub/rng.hpp"
#include "seqsub/sampling.hpp"

namespace py = pybind11;
using namespace seqsub;

namespace {

BucketPolicy parse_policy(const std::string& name) {
  if (name == "strict") return BucketPolicy::kStrict;
  if (name == "lenient") return BucketPolicy::kLenient;
  throw std::invalid_argument("policy must be 'strict' or 'lenient'");
}

std::vector<ItemId> sequence_to_list(const Sequence& pi) {
  return std::vector<ItemId>(pi.items().begin(), pi.items().end());
}

py::dict diagnostics_to_dict(const AlgoDiagnostics& d) {
  py::dict out;
  out["c"] = d.c;
  out["alpha"] = d.alpha;
  out["case_a_lhs"] = d.case_a_lhs;
  out["case_a_rhs"] = d.case_a_rhs;
  out["sum_delta_pi_s"] = d.sum_delta_pi_s;
  out["case_b_lhs"] = d.case_b_lhs;
  out["avg_phi_k"] = d.avg_phi_k;
  return out;
}

const InstanceRecord& require_record(const Instance& inst) {
  if (!inst.record.has_value()) {
    throw std::invalid_argument("instance carries no generation record");
  }
  return *inst.record;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Learning near-optimal item sequences from sampled utilities";

  py::register_exception<InsufficientSamplesError>(m, "InsufficientSamplesError",
                                                   PyExc_RuntimeError);
  py::register_exception<EnumerationGuardError>(m, "EnumerationGuardError",
                                                PyExc_RuntimeError);

  // --- instances -------------------------------------------------------------
  py::class_<Instance>(m, "Instance",
                       "Ground set of n items with position functions f_1..f_k")
      .def_property_readonly("n", &Instance::n)
      .def_readonly("k", &Instance::k)
      .def_readonly("bernoulli_compatible", &Instance::bernoulli_compatible)
      .def_property_readonly(
          "curvature_hint",
          [](const Instance& inst) -> std::optional<double> {
            return inst.curvature_hint;
          })
      .def_property_readonly("family",
                             [](const Instance& inst) -> std::optional<std::string> {
                               if (!inst.record.has_value()) return std::nullopt;
                               return inst.record->family;
                             })
      .def(
          "value",
          [](const Instance& inst, std::vector<ItemId> items) {
            return sequence_value(inst, Sequence(std::move(items)));
          },
          py::arg("items"),
          "Objective of the (possibly shorter than k) sequence of item ids")
      .def("record_json",
           [](const Instance& inst) { return instance_record_to_json(require_record(inst)); })
      .def("__repr__", [](const Instance& inst) {
        std::string family =
            inst.record.has_value() ? inst.record->family : std::string("custom");
        return "<Instance family=" + family + " n=" + std::to_string(inst.n()) +
               " k=" + std::to_string(inst.k) + ">";
      });

  m.def("make_modular_instance",
        static_cast<Instance (*)(int, int, double, double, std::uint64_t)>(
            &make_modular_instance),
        py::arg("n"), py::arg("k"), py::arg("weight_low"), py::arg("weight_high"),
        py::arg("seed"), "Modular instance with i.i.d. uniform weights");
  m.def("make_modular_instance",
        static_cast<Instance (*)(int, int, std::vector<double>)>(&make_modular_instance),
        py::arg("n"), py::arg("k"), py::arg("weights"),
        "Modular instance with explicit weights");
  m.def("make_coverage_instance", &make_coverage_instance, py::arg("n"), py::arg("k"),
        py::arg("universe_size"), py::arg("density"), py::arg("seed"),
        "k independent weighted-coverage functions");
  m.def("make_facility_instance", &make_facility_instance, py::arg("n"), py::arg("k"),
        py::arg("n_clients"), py::arg("seed"),
        "k independent facility-location functions");
  m.def(
      "make_patience_scaled_instance",
      [](const Instance& base, int k, std::vector<double> scales) {
        return make_patience_scaled_instance(require_record(base), k, std::move(scales));
      },
      py::arg("base"), py::arg("k"), py::arg("scales"),
      "Normalized base function scaled per position; sum(scales) <= 1 keeps "
      "the objective in [0, 1]");

  m.def("save_instance", &save_instance, py::arg("instance"), py::arg("path"));
  m.def("load_instance", &load_instance, py::arg("path"));
  m.def(
      "instance_from_record_json",
      [](const std::string& text) {
        return instance_from_record(instance_record_from_json(text));
      },
      py::arg("text"), "Rebuild an instance from its canonical record JSON");
  m.def(
      "sequence_value",
      [](const Instance& inst, std::vector<ItemId> items) {
        return sequence_value(inst, Sequence(std::move(items)));
      },
      py::arg("instance"), py::arg("items"));

  // --- sampling ----------------------------------------------------------------
  py::class_<ObservationModel>(m, "ObservationModel",
                               "How an observed phi relates to F(sequence)")
      .def_static("exact", &ObservationModel::exact)
      .def_static("bernoulli", &ObservationModel::bernoulli)
      .def_static("bounded_noise", &ObservationModel::bounded_noise, py::arg("b"))
      .def_property_readonly("kind",
                             [](const ObservationModel& model) {
                               switch (model.kind) {
                                 case ObservationKind::kExact: return "exact";
                                 case ObservationKind::kBernoulli: return "bernoulli";
                                 case ObservationKind::kBoundedNoise:
                                   return "bounded-noise";
                               }
                               return "?";
                             })
      .def_readonly("noise_half_width", &ObservationModel::noise_half_width)
      .def_property_readonly("value_bound",
                             [](const ObservationModel& model) { return model.value_bound; });

  py::class_<Dataset>(m, "Dataset", "Sampled (sequence, phi) records")
      .def_readonly("n", &Dataset::n)
      .def_readonly("k", &Dataset::k)
      .def_readonly("delta", &Dataset::delta)
      .def("__len__", &Dataset::size)
      .def(
          "record",
          [](const Dataset& ds, std::size_t idx) {
            const SampleRecord& rec = ds.records.at(idx);
            return py::make_tuple(sequence_to_list(rec.sequence), rec.phi);
          },
          py::arg("index"), "The index-th (items, phi) record")
      .def("records",
           [](const Dataset& ds) {
             py::list out;
             for (const SampleRecord& rec : ds.records) {
               out.append(py::make_tuple(sequence_to_list(rec.sequence), rec.phi));
             }
             return out;
           })
      .def("__repr__", [](const Dataset& ds) {
        return "<Dataset n=" + std::to_string(ds.n) + " k=" + std::to_string(ds.k) +
               " m=" + std::to_string(ds.size()) + ">";
      });

  m.def("build_dataset", &build_dataset, py::arg("instance"), py::arg("model"),
        py::arg("m"), py::arg("seed"),
        "m two-stage samples; deterministic for a given seed");
  m.def("save_dataset", &save_dataset, py::arg("dataset"), py::arg("path"));
  m.def("load_dataset", &load_dataset, py::arg("path"));
  m.def(
      "delta_bound",
      [](const Dataset& ds, std::optional<double> override_value) {
        return delta_bound(ds, override_value);
      },
      py::arg("dataset"), py::arg("override") = std::nullopt,
      "The override if given, else the max observed phi");

  // --- estimation --------------------------------------------------------------
  py::class_<DeltaMatrix>(m, "DeltaMatrix",
                          "Estimated marginal contribution per (item, slot)")
      .def_readonly("n", &DeltaMatrix::n)
      .def_readonly("k", &DeltaMatrix::k)
      .def("at", &DeltaMatrix::at, py::arg("item"), py::arg("slot"))
      .def("flagged_at", &DeltaMatrix::flagged_at, py::arg("item"), py::arg("slot"))
      .def(
          "n_last",
          [](const DeltaMatrix& dm, ItemId i, int t) {
            return dm.n_last.at(static_cast<std::size_t>(i) *
                                    static_cast<std::size_t>(dm.k) +
                                static_cast<std::size_t>(t));
          },
          py::arg("item"), py::arg("slot"))
      .def(
          "n_excl",
          [](const DeltaMatrix& dm, ItemId i, int t) {
            return dm.n_excl.at(static_cast<std::size_t>(i) *
                                    static_cast<std::size_t>(dm.k) +
                                static_cast<std::size_t>(t));
          },
          py::arg("item"), py::arg("slot"))
      .def("to_list", [](const DeltaMatrix& dm) {
        std::vector<std::vector<double>> rows(
            static_cast<std::size_t>(dm.n),
            std::vector<double>(static_cast<std::size_t>(dm.k)));
        for (ItemId i = 0; i < dm.n; ++i) {
          for (int t = 0; t < dm.k; ++t) {
            rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] = dm.at(i, t);
          }
        }
        return rows;
      });

  m.def(
      "estimate",
      [](const Dataset& ds, const std::string& policy) {
        return delta_tilde_matrix(build_buckets(ds), parse_policy(policy));
      },
      py::arg("dataset"), py::arg("policy") = "strict",
      "The full estimate matrix from a dataset");
  m.def(
      "average_full",
      [](const Dataset& ds, const std::string& policy) {
        return avg_full(build_buckets(ds), parse_policy(policy));
      },
      py::arg("dataset"), py::arg("policy") = "strict",
      "Mean observed phi over the length-k records");
  m.def(
      "concentration",
      [](const Dataset& ds, double target, std::optional<double> range,
         std::optional<double> delta_override) {
        const BucketIndex bi = build_buckets(ds);
        const ConcentrationReport rep =
            concentration_report(bi, delta_bound(ds, delta_override), target, range);
        py::dict out;
        out["delta"] = rep.delta;
        out["epsilon"] = rep.epsilon;
        out["range"] = rep.range;
        out["target_failure"] = rep.target_failure;
        out["min_bucket_size"] = rep.min_bucket_size;
        out["max_failure_bound"] = rep.max_failure_bound;
        out["all_meet_target"] = rep.all_meet_target;
        py::list entries;
        for (const BucketReportEntry& e : rep.entries) {
          entries.append(py::make_tuple(e.bucket, e.size, e.failure_bound));
        }
        out["entries"] = entries;
        return out;
      },
      py::arg("dataset"), py::arg("target"), py::arg("range") = std::nullopt,
      py::arg("delta_override") = std::nullopt,
      "Hoeffding failure bounds for every bucket the estimator consumes");

  // --- assignment ----------------------------------------------------------------
  m.def(
      "solve_p1",
      [](const std::vector<std::vector<double>>& weights) {
        const int n = static_cast<int>(weights.size());
        const int k = weights.empty() ? 0 : static_cast<int>(weights.front().size());
        const Assignment a = solve_P1(weights, n, k);
        return py::make_tuple(a.position_to_item, a.total_weight);
      },
      py::arg("weights"),
      "Max-total assignment of distinct items to positions; returns "
      "(items_by_position, total)");
  m.def(
      "solve_p1",
      [](const DeltaMatrix& dm) {
        const Assignment a = solve_P1(dm);
        return py::make_tuple(a.position_to_item, a.total_weight);
      },
      py::arg("matrix"));

  // --- algorithm -------------------------------------------------------------------
  py::class_<AlgoOutcome>(m, "Outcome", "One run of the learner on a dataset")
      .def_property_readonly(
          "sequence", [](const AlgoOutcome& out) { return sequence_to_list(out.sequence); })
      .def_property_readonly(
          "branch", [](const AlgoOutcome& out) { return std::string(branch_name(out.branch)); })
      .def_property_readonly(
          "pi_s", [](const AlgoOutcome& out) { return sequence_to_list(out.pi_s); })
      .def_property_readonly(
          "matching_total",
          [](const AlgoOutcome& out) { return out.matching.total_weight; })
      .def_readonly("min_bucket", &AlgoOutcome::min_bucket)
      .def_property_readonly(
          "diagnostics", [](const AlgoOutcome& out) { return diagnostics_to_dict(out.diag); })
      .def("__repr__", [](const AlgoOutcome& out) {
        std::string items;
        for (ItemId i : out.sequence.items()) {
          if (!items.empty()) items += ' ';
          items += std::to_string(i);
        }
        return "<Outcome branch=" + std::string(branch_name(out.branch)) +
               " sequence=[" + items + "]>";
      });

  m.def("compute_alpha", &compute_alpha, py::arg("n"), py::arg("k"),
        "Probability that a uniform ordered k-sample avoids a fixed k-set");
  m.def(
      "random_sequence",
      [](int n, int k, std::uint64_t seed) {
        Rng rng(seed);
        return sequence_to_list(random_sequence(n, k, rng));
      },
      py::arg("n"), py::arg("k"), py::arg("seed"),
      "A uniform ordered k-sequence of distinct items");
  m.def(
      "run",
      [](const Dataset& ds, std::optional<double> curvature, bool matching_only,
         std::uint64_t fallback_seed, const std::string& policy) {
        AlgoConfig cfg;
        cfg.curvature = curvature;
        cfg.mode = matching_only ? AlgoMode::kMatchingOnly : AlgoMode::kFull;
        cfg.fallback_seed = fallback_seed;
        cfg.policy = parse_policy(policy);
        return sequencing_from_samples(ds, ds.n, ds.k, cfg);
      },
      py::arg("dataset"), py::arg("curvature") = std::nullopt,
      py::arg("matching_only") = false, py::arg("fallback_seed") = 0,
      py::arg("policy") = "strict",
      "Estimate, solve the assignment, and pick the branch");

  // --- oracle ------------------------------------------------------------------------
  m.def(
      "brute_force_optimal",
      [](const Instance& inst) {
        const OracleResult res = brute_force_optimal(inst);
        return py::make_tuple(sequence_to_list(res.optimum_sequence), res.optimum_value);
      },
      py::arg("instance"), "(optimal sequence, optimal value) by enumeration");
  m.def("exact_delta", &exact_delta, py::arg("instance"), py::arg("item"), py::arg("slot"),
        "Exact expected gain of the item at the (0-based) slot");
  m.def("exact_delta_marginal_form", &exact_delta_marginal_form, py::arg("instance"),
        py::arg("item"), py::arg("slot"));
  m.def(
      "exact_expected_f",
      [](const Instance& inst) { return exact_expected_f(inst); },
      py::arg("instance"), "Exact mean objective of a uniform length-k sequence");
  m.def("measure_instance_curvature", &measure_instance_curvature, py::arg("instance"));
  m.def(
      "check_function",
      [](const Instance& inst, int t) {
        const FunctionCheckResult res = check_set_function(inst.function(t), inst.n());
        py::dict out;
        out["zero_on_empty"] = res.zero_on_empty;
        out["monotone"] = res.monotone;
        out["submodular"] = res.submodular;
        out["worst_violation"] = res.worst_violation;
        out["ok"] = res.ok();
        return out;
      },
      py::arg("instance"), py::arg("t"),
      "Brute-force structure check of position function f_t");
  m.def(
      "check_lemma4",
      [](const Instance& inst, int t_function, std::vector<ItemId> s, int t) {
        const Lemma4Result res = check_lemma4(inst.function(t_function), inst.n(), s, t);
        py::dict out;
        out["holds"] = res.holds;
        out["lhs"] = res.lhs;
        out["rhs"] = res.rhs;
        out["slack"] = res.slack;
        out["curvature"] = res.curvature;
        return out;
      },
      py::arg("instance"), py::arg("t_function"), py::arg("s"), py::arg("t"),
      "E_R[f(R|S)] >= (1-c) E_R[f(R)] with both sides enumerated");
  m.def(
      "check_lemma5",
      [](const Instance& inst) {
        const Lemma5Result res = check_lemma5(inst);
        py::dict out;
        out["skipped"] = res.skipped;
        out["holds"] = res.holds;
        out["lhs"] = res.lhs;
        out["rhs"] = res.rhs;
        out["alpha"] = res.alpha;
        return out;
      },
      py::arg("instance"));
  m.def(
      "virtual_union_value",
      [](const Instance& inst, std::vector<ItemId> pi, std::vector<ItemId> other) {
        return virtual_union_value(inst, Sequence(std::move(pi)), Sequence(std::move(other)));
      },
      py::arg("instance"), py::arg("pi"), py::arg("other"),
      "Objective of the slot-wise union of the two sequences");

  // --- experiments ----------------------------------------------------------------------
  m.def(
      "run_experiment_json",
      [](const std::string& config_text) {
        const ExperimentResult res = run_experiment(experiment_config_from_json(config_text));
        py::list rows;
        for (const ResultRow& row : res.rows) {
          py::dict r;
          r["seed"] = row.seed;
          r["branch"] = std::string(branch_name(row.branch));
          r["sequence"] = sequence_to_list(row.sequence);
          r["f_algo"] = row.f_algo;
          r["f_opt"] = row.f_opt;
          r["ratio"] = row.ratio;
          r["bound"] = row.bound;
          r["alpha"] = row.alpha;
          r["c"] = row.c;
          r["m"] = row.m;
          r["min_bucket"] = row.min_bucket;
          rows.append(r);
        }
        py::dict summary;
        summary["rows"] = res.summary.rows;
        summary["min_ratio"] = res.summary.min_ratio;
        summary["mean_ratio"] = res.summary.mean_ratio;
        summary["bound"] = res.summary.bound;
        summary["required"] = res.summary.required;
        summary["pass"] = res.summary.pass;
        py::dict out;
        out["rows"] = rows;
        out["summary"] = summary;
        return out;
      },
      py::arg("config_json"),
      "Run a multi-seed experiment from its JSON configuration");

  m.attr("__version__") = "0.1.0";
}
