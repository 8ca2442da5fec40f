#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "collabpac/harness.hpp"
#include "collabpac/instances.hpp"
#include "collabpac/verify.hpp"

namespace {

using nlohmann::json;

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

json load_config_file(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return json::parse(in);
}

template <typename T>
void fill_from_config(const CLI::Option* opt, const json& cfg, const char* key,
                      T& value) {
  if (opt->count() == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
}

// flag > config file > COLLABPAC_SEED > default
std::uint64_t resolve_seed(const CLI::Option* opt, const json& cfg,
                           std::uint64_t flag_value) {
  if (opt->count() > 0) return flag_value;
  if (cfg.contains("seed")) return cfg.at("seed").get<std::uint64_t>();
  if (const char* env = std::getenv("COLLABPAC_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return flag_value;
}

struct GenArgs {
  std::string kind;
  int k = 2;
  int d = 2;
  double eta = 0.0;
  double eps_inst = 0.25;
  std::uint64_t seed = 1;
  std::string out;
};

struct RunArgs {
  std::string alg;
  std::string instance_path;
  double eps = 0.1;
  double delta = 0.1;
  double alpha = 0.0;
  std::string preset = "paper";
  int trials = 10;
  std::uint64_t seed = 1;
  int jobs = 1;
  int round_cap = -1;  // -1 = preset default
  std::string report;
  std::string format = "csv";
  std::string config_path;
};

struct SweepArgs : RunArgs {
  std::string kind = "hard";
  std::vector<int> k_list;
  int d = 4;
  double eta = 0.0;
  double eps_inst = 0.25;
  std::uint64_t instance_seed = 1;
};

struct PredictArgs {
  std::string alg;
  int k = 2;
  int d = 2;
  double eps = 0.1;
  double delta = 0.1;
  double alpha = 0.0;
  std::string preset = "paper";
  int round_cap = -1;
  std::string config_path;
};

collabpac::Instance generate_instance(const std::string& kind, int k, int d, double eta,
                                      double eps_inst, std::uint64_t seed) {
  if (kind == "realizable") return collabpac::make_realizable_instance(k, d, seed, eps_inst);
  if (kind == "hard") return collabpac::make_hard_instance(k, eps_inst, seed);
  if (kind == "noisy") return collabpac::make_noisy_instance(k, d, eta, seed, eps_inst);
  throw std::invalid_argument("unknown instance kind: " + kind);
}

collabpac::RunConfig build_run_config(const RunArgs& args) {
  collabpac::RunConfig config;
  config.alg = collabpac::algorithm_from_string(args.alg);
  config.eps = args.eps;
  config.delta = args.delta;
  config.alpha = args.alpha;
  config.preset = args.preset;
  if (args.round_cap >= 0) config.agnostic_round_cap = args.round_cap;
  config.validate();
  return config;
}

int do_gen_instance(const GenArgs& args) {
  const collabpac::Instance instance =
      generate_instance(args.kind, args.k, args.d, args.eta, args.eps_inst, args.seed);
  collabpac::save_instance(instance, args.out);
  std::cout << "wrote " << args.out << " kind " << args.kind << " k " << instance.k
            << " d " << instance.concept_class.vc_dim() << " opt " << fmt9(instance.opt)
            << "\n";
  return 0;
}

void print_trials(const collabpac::TrialStats& stats) {
  for (int i = 0; i < stats.n_trials; ++i) {
    std::cout << "trial " << i << " seed " << stats.base_seed + i << " max_error "
              << fmt9(stats.max_errors[static_cast<std::size_t>(i)]) << " samples "
              << stats.totals[static_cast<std::size_t>(i)] << "\n";
  }
  const collabpac::ReportRow row = collabpac::to_report_row(stats);
  std::cout << "algorithm " << row.algorithm << " preset " << row.preset << " k " << row.k
            << " d " << row.d << " eps " << fmt9(row.eps) << " delta " << fmt9(row.delta)
            << " alpha " << fmt9(row.alpha) << "\n";
  std::cout << "opt " << fmt9(stats.opt) << " bound " << fmt9(stats.bound) << "\n";
  std::cout << "success " << stats.success_count << "/" << stats.n_trials << " rate "
            << fmt9(row.success_rate) << "\n";
  std::cout << "mean_max_error " << fmt9(row.mean_max_error) << "\n";
  std::cout << "samples mean " << fmt9(row.total_samples_mean) << " predicted "
            << row.total_samples_predicted << "\n";
}

int do_run(const RunArgs& args) {
  const collabpac::Instance instance = collabpac::load_instance(args.instance_path);
  const collabpac::RunConfig config = build_run_config(args);
  const collabpac::TrialStats stats =
      collabpac::run_trials(instance, config, args.trials, args.seed, args.jobs);
  print_trials(stats);
  if (!args.report.empty()) {
    collabpac::write_report({collabpac::to_report_row(stats)}, args.format, args.report);
    std::cout << "report " << args.report << "\n";
  }
  return 0;
}

int do_sweep(const SweepArgs& args) {
  if (args.k_list.empty()) throw std::invalid_argument("sweep: --k-list is required");
  std::vector<collabpac::ReportRow> rows;
  for (int k : args.k_list) {
    const collabpac::Instance instance = generate_instance(
        args.kind, k, args.d, args.eta, args.eps_inst, args.instance_seed);
    const collabpac::RunConfig config = build_run_config(args);
    const collabpac::TrialStats stats =
        collabpac::run_trials(instance, config, args.trials, args.seed, args.jobs);
    const collabpac::ReportRow row = collabpac::to_report_row(stats);
    std::cout << "k " << k << " success_rate " << fmt9(row.success_rate)
              << " mean_max_error " << fmt9(row.mean_max_error) << " samples_predicted "
              << row.total_samples_predicted << "\n";
    rows.push_back(row);
  }
  if (!args.report.empty()) {
    collabpac::write_report(rows, args.format, args.report);
    std::cout << "report " << args.report << "\n";
  }
  return 0;
}

int do_predict(const PredictArgs& args) {
  collabpac::RunConfig config;
  config.alg = collabpac::algorithm_from_string(args.alg);
  config.eps = args.eps;
  config.delta = args.delta;
  config.alpha = args.alpha;
  config.preset = args.preset;
  if (args.round_cap >= 0) config.agnostic_round_cap = args.round_cap;
  config.validate();

  const std::int64_t total = collabpac::predicted_totals(config, args.k, args.d);
  std::cout << "algorithm " << collabpac::to_string(config.alg) << " preset "
            << config.preset << " k " << args.k << " d " << args.d << " eps "
            << fmt9(config.eps) << " delta " << fmt9(config.delta) << " alpha "
            << fmt9(config.alpha) << "\n";

  using collabpac::AlgorithmTag;
  if (config.alg == AlgorithmTag::R1 || config.alg == AlgorithmTag::R2) {
    const collabpac::RealizableConfig c = config.realizable_config();
    const bool r1 = config.alg == AlgorithmTag::R1;
    const int t = r1 ? c.r1_rounds(args.k) : c.r2_rounds(args.k);
    const double dp = r1 ? c.r1_delta_prime(args.k) : c.r2_delta_prime(args.k);
    const std::int64_t learn = c.learn_sample_size(dp, args.d);
    const std::int64_t test =
        r1 ? c.test_sample_size(args.k, dp) : c.fasttest_sample_size();
    std::cout << "rounds " << t << "\n";
    std::cout << "learn_per_round " << learn << "\n";
    std::cout << "test_per_player " << test << "\n";
    std::cout << "learn_total " << static_cast<std::int64_t>(t) * learn << "\n";
    std::cout << "test_total " << static_cast<std::int64_t>(t) * args.k * test << "\n";
  } else if (config.alg != AlgorithmTag::Naive) {
    const collabpac::AgnosticConfig c = config.agnostic_config();
    const auto variant = [&] {
      switch (config.alg) {
        case AlgorithmTag::NR1: return collabpac::AgnosticVariant::NR1;
        case AlgorithmTag::NR2: return collabpac::AgnosticVariant::NR2;
        case AlgorithmTag::NR1Avg: return collabpac::AgnosticVariant::NR1Avg;
        default: return collabpac::AgnosticVariant::NR2Avg;
      }
    }();
    const int t = c.rounds(variant, args.k);
    const std::int64_t learn = c.learn_sample_size(variant, args.k, args.d);
    const std::int64_t test = c.test_sample_size(variant, args.k);
    std::cout << "rounds " << t << "\n";
    std::cout << "learn_per_round " << learn << "\n";
    std::cout << "test_per_player " << test << "\n";
    std::cout << "learn_total " << static_cast<std::int64_t>(t) * learn << "\n";
    std::cout << "test_total " << static_cast<std::int64_t>(t) * args.k * test << "\n";
  } else {
    std::cout << "per_player "
              << collabpac::realizable_sample_size(config.eps, config.delta / args.k,
                                                   args.d, config.sizes)
              << "\n";
  }
  std::cout << "total " << total << "\n";
  return 0;
}

int do_verify(std::uint64_t seed) {
  bool all_pass = true;
  for (const collabpac::PropertyResult& r : collabpac::run_property_suites(seed)) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    all_pass = all_pass && r.pass;
  }
  std::cout << (all_pass ? "verify: all suites passed" : "verify: FAILURES") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collabpac — collaborative PAC learning algorithms and experiment harness"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-instance", "Generate a synthetic instance");
  gen_cmd->add_option("--kind", gen.kind, "realizable | hard | noisy")->required();
  gen_cmd->add_option("--k", gen.k, "number of players (default 2)");
  gen_cmd->add_option("--d", gen.d, "VC dimension; ignored for hard, which uses d = k (default 2)");
  gen_cmd->add_option("--eta", gen.eta, "label-flip probability for noisy (default 0)");
  gen_cmd->add_option("--eps-inst", gen.eps_inst, "mass 2*eps_inst off the anchor point (default 0.25)");
  auto* gen_seed = gen_cmd->add_option("--seed", gen.seed, "generator seed (default 1, or COLLABPAC_SEED)");
  gen_cmd->add_option("--out", gen.out, "output instance file")->required();

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run seeded trials of one algorithm on an instance");
  run_cmd->add_option("--alg", run.alg, "r1 | r2 | nr1 | nr2 | nr1-avg | nr2-avg | naive")->required();
  auto* run_instance = run_cmd->add_option("--instance", run.instance_path, "instance file from gen-instance");
  auto* run_eps = run_cmd->add_option("--eps", run.eps, "target error (default 0.1)");
  auto* run_delta = run_cmd->add_option("--delta", run.delta, "failure probability (default 0.1)");
  auto* run_alpha = run_cmd->add_option("--alpha", run.alpha, "agnostic approximation parameter (default 0)");
  auto* run_preset = run_cmd->add_option("--preset", run.preset, "paper | desk (default paper)");
  auto* run_trials_opt = run_cmd->add_option("--trials", run.trials, "number of seeded trials (default 10)");
  auto* run_seed = run_cmd->add_option("--seed", run.seed, "base seed (default 1, or COLLABPAC_SEED)");
  auto* run_jobs = run_cmd->add_option("--jobs", run.jobs, "worker threads for trials (default 1)");
  auto* run_cap = run_cmd->add_option("--round-cap", run.round_cap, "agnostic round cap override (default: preset)");
  auto* run_report = run_cmd->add_option("--report", run.report, "write a report file");
  auto* run_format = run_cmd->add_option("--format", run.format, "csv | json (default csv)");
  run_cmd->add_option("--config", run.config_path, "JSON config file; flags win over file values");

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run trials over a grid of player counts");
  sweep_cmd->add_option("--alg", sweep.alg, "algorithm tag")->required();
  sweep_cmd->add_option("--k-list", sweep.k_list, "comma-separated player counts")
      ->delimiter(',')->required();
  sweep_cmd->add_option("--kind", sweep.kind, "instance kind (default hard)");
  sweep_cmd->add_option("--d", sweep.d, "VC dimension for realizable/noisy (default 4)");
  sweep_cmd->add_option("--eta", sweep.eta, "noise rate for noisy (default 0)");
  sweep_cmd->add_option("--eps-inst", sweep.eps_inst, "instance mass parameter (default 0.25)");
  sweep_cmd->add_option("--instance-seed", sweep.instance_seed, "instance generator seed (default 1)");
  auto* sweep_eps = sweep_cmd->add_option("--eps", sweep.eps, "target error (default 0.1)");
  auto* sweep_delta = sweep_cmd->add_option("--delta", sweep.delta, "failure probability (default 0.1)");
  auto* sweep_alpha = sweep_cmd->add_option("--alpha", sweep.alpha, "agnostic alpha (default 0)");
  auto* sweep_preset = sweep_cmd->add_option("--preset", sweep.preset, "paper | desk (default paper)");
  auto* sweep_trials = sweep_cmd->add_option("--trials", sweep.trials, "trials per grid point (default 10)");
  auto* sweep_seed = sweep_cmd->add_option("--seed", sweep.seed, "base seed (default 1, or COLLABPAC_SEED)");
  auto* sweep_jobs = sweep_cmd->add_option("--jobs", sweep.jobs, "worker threads (default 1)");
  auto* sweep_cap = sweep_cmd->add_option("--round-cap", sweep.round_cap, "agnostic round cap override");
  auto* sweep_report = sweep_cmd->add_option("--report", sweep.report, "write a report file");
  auto* sweep_format = sweep_cmd->add_option("--format", sweep.format, "csv | json (default csv)");
  sweep_cmd->add_option("--config", sweep.config_path, "JSON config file");

  PredictArgs predict;
  CLI::App* predict_cmd = app.add_subcommand("predict", "Print the closed-form sample count of a config");
  predict_cmd->add_option("--alg", predict.alg, "algorithm tag")->required();
  predict_cmd->add_option("--k", predict.k, "players (default 2)");
  predict_cmd->add_option("--d", predict.d, "VC dimension (default 2)");
  auto* predict_eps = predict_cmd->add_option("--eps", predict.eps, "target error (default 0.1)");
  auto* predict_delta = predict_cmd->add_option("--delta", predict.delta, "failure probability (default 0.1)");
  auto* predict_alpha = predict_cmd->add_option("--alpha", predict.alpha, "agnostic alpha (default 0)");
  auto* predict_preset = predict_cmd->add_option("--preset", predict.preset, "paper | desk (default paper)");
  auto* predict_cap = predict_cmd->add_option("--round-cap", predict.round_cap, "agnostic round cap override");
  predict_cmd->add_option("--config", predict.config_path, "JSON config file");

  std::uint64_t verify_seed = 1;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run the built-in property suites");
  verify_cmd->add_option("--seed", verify_seed, "suite seed (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen_cmd->parsed()) {
      gen.seed = resolve_seed(gen_seed, json::object(), gen.seed);
      return do_gen_instance(gen);
    }
    if (run_cmd->parsed()) {
      const json cfg = load_config_file(run.config_path);
      fill_from_config(run_instance, cfg, "instance", run.instance_path);
      fill_from_config(run_eps, cfg, "eps", run.eps);
      fill_from_config(run_delta, cfg, "delta", run.delta);
      fill_from_config(run_alpha, cfg, "alpha", run.alpha);
      fill_from_config(run_preset, cfg, "preset", run.preset);
      fill_from_config(run_trials_opt, cfg, "trials", run.trials);
      fill_from_config(run_jobs, cfg, "jobs", run.jobs);
      fill_from_config(run_cap, cfg, "round-cap", run.round_cap);
      fill_from_config(run_report, cfg, "report", run.report);
      fill_from_config(run_format, cfg, "format", run.format);
      run.seed = resolve_seed(run_seed, cfg, run.seed);
      if (run.instance_path.empty()) {
        throw std::invalid_argument("run: --instance is required (flag or config file)");
      }
      return do_run(run);
    }
    if (sweep_cmd->parsed()) {
      const json cfg = load_config_file(sweep.config_path);
      fill_from_config(sweep_eps, cfg, "eps", sweep.eps);
      fill_from_config(sweep_delta, cfg, "delta", sweep.delta);
      fill_from_config(sweep_alpha, cfg, "alpha", sweep.alpha);
      fill_from_config(sweep_preset, cfg, "preset", sweep.preset);
      fill_from_config(sweep_trials, cfg, "trials", sweep.trials);
      fill_from_config(sweep_jobs, cfg, "jobs", sweep.jobs);
      fill_from_config(sweep_cap, cfg, "round-cap", sweep.round_cap);
      fill_from_config(sweep_report, cfg, "report", sweep.report);
      fill_from_config(sweep_format, cfg, "format", sweep.format);
      sweep.seed = resolve_seed(sweep_seed, cfg, sweep.seed);
      return do_sweep(sweep);
    }
    if (predict_cmd->parsed()) {
      const json cfg = load_config_file(predict.config_path);
      fill_from_config(predict_eps, cfg, "eps", predict.eps);
      fill_from_config(predict_delta, cfg, "delta", predict.delta);
      fill_from_config(predict_alpha, cfg, "alpha", predict.alpha);
      fill_from_config(predict_preset, cfg, "preset", predict.preset);
      fill_from_config(predict_cap, cfg, "round-cap", predict.round_cap);
      return do_predict(predict);
    }
    if (verify_cmd->parsed()) {
      return do_verify(verify_seed);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
