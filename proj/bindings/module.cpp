#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>

#include "collabpac/harness.hpp"
#include "collabpac/instances.hpp"
#include "collabpac/verify.hpp"

namespace py = pybind11;
using namespace collabpac;

namespace {

RunConfig build_config(const std::string& alg, double eps, double delta, double alpha,
                       const std::string& preset, std::optional<int> round_cap) {
  RunConfig config;
  config.alg = algorithm_from_string(alg);
  config.eps = eps;
  config.delta = delta;
  config.alpha = alpha;
  config.preset = preset;
  config.agnostic_round_cap = round_cap;
  config.validate();
  return config;
}

py::dict summarize_run(const Instance& instance, const RunConfig& config,
                       std::uint64_t seed) {
  const RunResult result = run_algorithm(instance, config, seed);
  py::list errors;
  for (const DiscreteDistribution& dist : instance.distributions) {
    errors.append(exact_error(result.classifier, dist));
  }
  py::dict out;
  out["algorithm"] = to_string(config.alg);
  out["player_errors"] = errors;
  out["rounds"] = result.rounds.size();
  out["ledger_total"] = result.ledger.total();
  out["predicted_total"] =
      predicted_totals(config, instance.k, instance.concept_class.vc_dim());
  return out;
}

py::dict summarize_trials(const TrialStats& stats) {
  py::dict out;
  out["algorithm"] = to_string(stats.config.alg);
  out["k"] = stats.k;
  out["d"] = stats.d;
  out["opt"] = stats.opt;
  out["bound"] = stats.bound;
  out["n_trials"] = stats.n_trials;
  out["success_count"] = stats.success_count;
  out["success_rate"] = stats.success_rate();
  out["mean_max_error"] = stats.mean_max_error();
  out["max_errors"] = stats.max_errors;
  out["ledger_totals"] = stats.totals;
  out["predicted_total"] = predicted_totals(stats.config, stats.k, stats.d);
  return out;
}

}  // namespace

PYBIND11_MODULE(_collabpac, m) {
  m.doc() = "Collaborative PAC learning algorithms (R1/R2, NR1/NR2, NR-AVG) "
            "with exact-error instances and sample accounting";

  py::class_<Instance>(m, "Instance")
      .def_readonly("k", &Instance::k)
      .def_readonly("opt", &Instance::opt)
      .def_property_readonly(
          "d", [](const Instance& i) { return i.concept_class.vc_dim(); })
      .def_property_readonly(
          "target", [](const Instance& i) { return i.target; })
      .def_property_readonly(
          "num_hypotheses", [](const Instance& i) { return i.concept_class.size(); })
      .def("to_json", &instance_to_json)
      .def("save", &save_instance, py::arg("path"))
      .def("__repr__", [](const Instance& i) {
        return "<collabpac.Instance k=" + std::to_string(i.k) +
               " d=" + std::to_string(i.concept_class.vc_dim()) +
               " opt=" + std::to_string(i.opt) + ">";
      });

  m.def("make_realizable_instance", &make_realizable_instance, py::arg("k"),
        py::arg("d"), py::arg("seed"), py::arg("eps_inst") = 0.25);
  m.def("make_hard_instance", &make_hard_instance, py::arg("k"),
        py::arg("eps_inst") = 0.25, py::arg("seed") = 0);
  m.def("make_noisy_instance", &make_noisy_instance, py::arg("k"), py::arg("d"),
        py::arg("eta"), py::arg("seed"), py::arg("eps_inst") = 0.25);
  m.def("compute_opt", &compute_opt, py::arg("instance"));
  m.def("load_instance", &load_instance, py::arg("path"));
  m.def("instance_from_json", &instance_from_json, py::arg("text"));

  m.def("realizable_sample_size",
        [](double eps, double delta, int d, double c) {
          return realizable_sample_size(eps, delta, d, SampleSizeConfig{c, c});
        },
        py::arg("eps"), py::arg("delta"), py::arg("d"), py::arg("c") = 1.0);
  m.def("agnostic_sample_size",
        [](double eps, double delta, double alpha, int d, double c) {
          return agnostic_sample_size(eps, delta, alpha, d, SampleSizeConfig{c, c});
        },
        py::arg("eps"), py::arg("delta"), py::arg("alpha"), py::arg("d"),
        py::arg("c") = 1.0);

  m.def("predicted_totals",
        [](const std::string& alg, int k, int d, double eps, double delta, double alpha,
           const std::string& preset, std::optional<int> round_cap) {
          return predicted_totals(build_config(alg, eps, delta, alpha, preset, round_cap),
                                  k, d);
        },
        py::arg("alg"), py::arg("k"), py::arg("d"), py::arg("eps"), py::arg("delta"),
        py::arg("alpha") = 0.0, py::arg("preset") = "paper",
        py::arg("round_cap") = py::none(),
        "Closed-form sample count for one run; equals the run ledger total.");

  m.def("run",
        [](const std::string& alg, const Instance& instance, double eps, double delta,
           double alpha, const std::string& preset, std::uint64_t seed,
           std::optional<int> round_cap) {
          return summarize_run(instance,
                               build_config(alg, eps, delta, alpha, preset, round_cap),
                               seed);
        },
        py::arg("alg"), py::arg("instance"), py::arg("eps"), py::arg("delta"),
        py::arg("alpha") = 0.0, py::arg("preset") = "paper", py::arg("seed") = 1,
        py::arg("round_cap") = py::none(),
        "One seeded run; returns per-player exact errors and sample counts.");

  m.def("run_trials",
        [](const std::string& alg, const Instance& instance, double eps, double delta,
           double alpha, const std::string& preset, int trials, std::uint64_t seed,
           int jobs, std::optional<int> round_cap) {
          const RunConfig config =
              build_config(alg, eps, delta, alpha, preset, round_cap);
          py::gil_scoped_release release;
          const TrialStats stats = run_trials(instance, config, trials, seed, jobs);
          py::gil_scoped_acquire acquire;
          return summarize_trials(stats);
        },
        py::arg("alg"), py::arg("instance"), py::arg("eps"), py::arg("delta"),
        py::arg("alpha") = 0.0, py::arg("preset") = "paper", py::arg("trials") = 10,
        py::arg("seed") = 1, py::arg("jobs") = 1, py::arg("round_cap") = py::none(),
        "Seeded Monte-Carlo trials; success means the guarantee bound held.");

  m.def("verify",
        [](std::uint64_t seed) {
          py::list results;
          for (const PropertyResult& r : run_property_suites(seed)) {
            py::dict d;
            d["name"] = r.name;
            d["pass"] = r.pass;
            d["detail"] = r.detail;
            results.append(d);
          }
          return results;
        },
        py::arg("seed") = 1, "Run the built-in property suites.");
}
