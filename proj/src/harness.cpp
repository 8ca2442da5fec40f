#include "collabpac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>

#include <json.hpp>

namespace collabpac {

std::string to_string(AlgorithmTag tag) {
  switch (tag) {
    case AlgorithmTag::R1: return "r1";
    case AlgorithmTag::R2: return "r2";
    case AlgorithmTag::NR1: return "nr1";
    case AlgorithmTag::NR2: return "nr2";
    case AlgorithmTag::NR1Avg: return "nr1-avg";
    case AlgorithmTag::NR2Avg: return "nr2-avg";
    case AlgorithmTag::Naive: return "naive";
  }
  throw std::logic_error("to_string: bad AlgorithmTag");
}

AlgorithmTag algorithm_from_string(const std::string& name) {
  if (name == "r1") return AlgorithmTag::R1;
  if (name == "r2") return AlgorithmTag::R2;
  if (name == "nr1") return AlgorithmTag::NR1;
  if (name == "nr2") return AlgorithmTag::NR2;
  if (name == "nr1-avg") return AlgorithmTag::NR1Avg;
  if (name == "nr2-avg") return AlgorithmTag::NR2Avg;
  if (name == "naive") return AlgorithmTag::Naive;
  throw std::invalid_argument("unknown algorithm: " + name);
}

bool is_realizable_algorithm(AlgorithmTag tag) {
  return tag == AlgorithmTag::R1 || tag == AlgorithmTag::R2 ||
         tag == AlgorithmTag::Naive;
}

bool is_average_algorithm(AlgorithmTag tag) {
  return tag == AlgorithmTag::NR1Avg || tag == AlgorithmTag::NR2Avg;
}

namespace {

AgnosticVariant agnostic_variant(AlgorithmTag tag) {
  switch (tag) {
    case AlgorithmTag::NR1: return AgnosticVariant::NR1;
    case AlgorithmTag::NR2: return AgnosticVariant::NR2;
    case AlgorithmTag::NR1Avg: return AgnosticVariant::NR1Avg;
    case AlgorithmTag::NR2Avg: return AgnosticVariant::NR2Avg;
    default: throw std::invalid_argument("not an agnostic algorithm");
  }
}

}  // namespace

RealizableConfig RunConfig::realizable_config() const {
  RealizableConfig c = preset == "desk" ? RealizableConfig::desk(eps, delta)
                                        : RealizableConfig::paper(eps, delta);
  c.sizes = sizes;
  return c;
}

AgnosticConfig RunConfig::agnostic_config() const {
  AgnosticConfig c = preset == "desk" ? AgnosticConfig::desk(eps, delta, alpha)
                                      : AgnosticConfig::paper(eps, delta, alpha);
  c.sizes = sizes;
  if (agnostic_round_cap) c.round_cap = *agnostic_round_cap;
  return c;
}

void RunConfig::validate() const {
  if (preset != "paper" && preset != "desk") {
    throw std::invalid_argument("preset must be 'paper' or 'desk'");
  }
  if (is_realizable_algorithm(alg)) {
    realizable_config().validate();
  } else {
    agnostic_config().validate(agnostic_variant(alg));
  }
}

RunResult run_algorithm(const Instance& instance, const RunConfig& config,
                        std::uint64_t seed) {
  Rng rng(seed);
  switch (config.alg) {
    case AlgorithmTag::R1: return run_r1(instance, config.realizable_config(), rng);
    case AlgorithmTag::R2: return run_r2(instance, config.realizable_config(), rng);
    case AlgorithmTag::NR1:
    case AlgorithmTag::NR2:
    case AlgorithmTag::NR1Avg:
    case AlgorithmTag::NR2Avg:
      return run_agnostic(agnostic_variant(config.alg), instance,
                          config.agnostic_config(), rng);
    case AlgorithmTag::Naive:
      throw std::invalid_argument("run_algorithm: naive returns per-player classifiers");
  }
  throw std::logic_error("run_algorithm: bad tag");
}

double guarantee_bound(const RunConfig& config, double opt) {
  if (is_realizable_algorithm(config.alg)) return config.eps;
  if (is_average_algorithm(config.alg)) return (1.0 + config.alpha) * opt + config.eps;
  return (2.0 + config.alpha) * opt + config.eps;
}

NaiveResult naive_baseline(const Instance& instance, double eps, double delta,
                           const SampleSizeConfig& sizes, std::uint64_t seed) {
  const int k = instance.k;
  const std::int64_t per_player = realizable_sample_size(
      eps, delta / static_cast<double>(k), instance.concept_class.vc_dim(), sizes);
  Rng rng(seed);
  NaiveResult result;
  result.classifiers.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    SampleSet sample;
    sample.provenance = i;
    sample.examples.reserve(static_cast<std::size_t>(per_player));
    for (std::int64_t j = 0; j < per_player; ++j) {
      sample.examples.push_back(
          instance.distributions[static_cast<std::size_t>(i)].sample(rng));
    }
    result.ledger.charge(i, 0, SamplePurpose::Learn, per_player);
    const std::size_t hyp = erm(instance.concept_class, sample);
    result.classifiers.push_back(instance.concept_class.classifier(hyp));
  }
  return result;
}

std::int64_t predicted_totals(const RunConfig& config, int k, int d) {
  config.validate();
  switch (config.alg) {
    case AlgorithmTag::R1: {
      const RealizableConfig c = config.realizable_config();
      const int t = c.r1_rounds(k);
      const double dp = c.r1_delta_prime(k);
      return static_cast<std::int64_t>(t) *
             (c.learn_sample_size(dp, d) + k * c.test_sample_size(k, dp));
    }
    case AlgorithmTag::R2: {
      const RealizableConfig c = config.realizable_config();
      const int t = c.r2_rounds(k);
      const double dp = c.r2_delta_prime(k);
      return static_cast<std::int64_t>(t) *
             (c.learn_sample_size(dp, d) + k * c.fasttest_sample_size());
    }
    case AlgorithmTag::NR1:
    case AlgorithmTag::NR2:
    case AlgorithmTag::NR1Avg:
    case AlgorithmTag::NR2Avg: {
      const AgnosticConfig c = config.agnostic_config();
      const AgnosticVariant v = agnostic_variant(config.alg);
      const int t = c.rounds(v, k);
      return static_cast<std::int64_t>(t) *
             (c.learn_sample_size(v, k, d) + k * c.test_sample_size(v, k));
    }
    case AlgorithmTag::Naive:
      return static_cast<std::int64_t>(k) *
             realizable_sample_size(config.eps, config.delta / k, d, config.sizes);
  }
  throw std::logic_error("predicted_totals: bad tag");
}

double TrialStats::success_rate() const {
  return n_trials == 0 ? 0.0
                       : static_cast<double>(success_count) / static_cast<double>(n_trials);
}

double TrialStats::mean_max_error() const {
  if (max_errors.empty()) return 0.0;
  return std::accumulate(max_errors.begin(), max_errors.end(), 0.0) /
         static_cast<double>(max_errors.size());
}

double TrialStats::mean_total() const {
  if (totals.empty()) return 0.0;
  const std::int64_t sum = std::accumulate(totals.begin(), totals.end(), std::int64_t{0});
  return static_cast<double>(sum) / static_cast<double>(totals.size());
}

std::int64_t TrialStats::max_total() const {
  return totals.empty() ? 0 : *std::max_element(totals.begin(), totals.end());
}

namespace {

struct TrialOutcome {
  double max_error = 0.0;
  std::int64_t total = 0;
};

TrialOutcome execute_trial(const Instance& instance, const RunConfig& config,
                           std::uint64_t seed) {
  TrialOutcome outcome;
  if (config.alg == AlgorithmTag::Naive) {
    const NaiveResult naive =
        naive_baseline(instance, config.eps, config.delta, config.sizes, seed);
    for (int i = 0; i < instance.k; ++i) {
      outcome.max_error = std::max(
          outcome.max_error,
          exact_error(naive.classifiers[static_cast<std::size_t>(i)],
                      instance.distributions[static_cast<std::size_t>(i)]));
    }
    outcome.total = naive.ledger.total();
    return outcome;
  }
  const RunResult run = run_algorithm(instance, config, seed);
  for (const DiscreteDistribution& dist : instance.distributions) {
    outcome.max_error = std::max(outcome.max_error, exact_error(run.classifier, dist));
  }
  outcome.total = run.ledger.total();
  return outcome;
}

}  // namespace

TrialStats run_trials(const Instance& instance, const RunConfig& config, int n_trials,
                      std::uint64_t base_seed, int jobs) {
  if (n_trials < 1) throw std::invalid_argument("run_trials: n_trials must be >= 1");
  if (jobs < 1) throw std::invalid_argument("run_trials: jobs must be >= 1");
  config.validate();

  TrialStats stats;
  stats.config = config;
  stats.k = instance.k;
  stats.d = instance.concept_class.vc_dim();
  stats.opt = instance.opt;
  stats.bound = guarantee_bound(config, instance.opt);
  stats.n_trials = n_trials;
  stats.base_seed = base_seed;
  stats.max_errors.resize(static_cast<std::size_t>(n_trials));
  stats.totals.resize(static_cast<std::size_t>(n_trials));

  const auto worker_count = std::min(jobs, n_trials);
  if (worker_count == 1) {
    for (int i = 0; i < n_trials; ++i) {
      const TrialOutcome o = execute_trial(instance, config, base_seed + i);
      stats.max_errors[static_cast<std::size_t>(i)] = o.max_error;
      stats.totals[static_cast<std::size_t>(i)] = o.total;
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(worker_count));
    for (int w = 0; w < worker_count; ++w) {
      workers.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n_trials; i = next.fetch_add(1)) {
          const TrialOutcome o = execute_trial(instance, config, base_seed + i);
          stats.max_errors[static_cast<std::size_t>(i)] = o.max_error;
          stats.totals[static_cast<std::size_t>(i)] = o.total;
        }
      });
    }
    for (std::thread& t : workers) t.join();
  }

  for (double e : stats.max_errors) {
    if (e <= stats.bound) ++stats.success_count;
  }
  return stats;
}

ReportRow to_report_row(const TrialStats& stats) {
  ReportRow row;
  row.algorithm = to_string(stats.config.alg);
  row.k = stats.k;
  row.d = stats.d;
  row.eps = stats.config.eps;
  row.delta = stats.config.delta;
  row.alpha = stats.config.alpha;
  row.preset = stats.config.preset;
  row.n_trials = stats.n_trials;
  row.success_rate = stats.success_rate();
  row.mean_max_error = stats.mean_max_error();
  row.total_samples_mean = stats.mean_total();
  row.total_samples_predicted = predicted_totals(stats.config, stats.k, stats.d);
  row.seed_base = stats.base_seed;
  return row;
}

namespace {

// Floats are reported with 9 significant digits, in both formats.
std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

constexpr const char* kCsvHeader =
    "algorithm,k,d,eps,delta,alpha,preset,n_trials,success_rate,mean_max_error,"
    "total_samples_mean,total_samples_predicted,seed_base";

}  // namespace

void write_report_csv(const std::vector<ReportRow>& rows, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const ReportRow& r : rows) {
    out << r.algorithm << ',' << r.k << ',' << r.d << ',' << format_double(r.eps) << ','
        << format_double(r.delta) << ',' << format_double(r.alpha) << ',' << r.preset
        << ',' << r.n_trials << ',' << format_double(r.success_rate) << ','
        << format_double(r.mean_max_error) << ',' << format_double(r.total_samples_mean)
        << ',' << r.total_samples_predicted << ',' << r.seed_base << "\n";
  }
}

void write_report_json(const std::vector<ReportRow>& rows, std::ostream& out) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ReportRow& r : rows) {
    nlohmann::json j;
    j["algorithm"] = r.algorithm;
    j["k"] = r.k;
    j["d"] = r.d;
    j["eps"] = std::strtod(format_double(r.eps).c_str(), nullptr);
    j["delta"] = std::strtod(format_double(r.delta).c_str(), nullptr);
    j["alpha"] = std::strtod(format_double(r.alpha).c_str(), nullptr);
    j["preset"] = r.preset;
    j["n_trials"] = r.n_trials;
    j["success_rate"] = std::strtod(format_double(r.success_rate).c_str(), nullptr);
    j["mean_max_error"] = std::strtod(format_double(r.mean_max_error).c_str(), nullptr);
    j["total_samples_mean"] =
        std::strtod(format_double(r.total_samples_mean).c_str(), nullptr);
    j["total_samples_predicted"] = r.total_samples_predicted;
    j["seed_base"] = r.seed_base;
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << "\n";
}

void write_report(const std::vector<ReportRow>& rows, const std::string& format,
                  const std::string& path) {
  if (format != "csv" && format != "json") {
    throw std::invalid_argument("unknown report format: " + format);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open report for writing: " + path);
  if (format == "csv") {
    write_report_csv(rows, out);
  } else {
    write_report_json(rows, out);
  }
  if (!out) throw std::runtime_error("report write failed: " + path);
}

std::vector<ReportRow> read_report_json(std::istream& in) {
  const nlohmann::json arr = nlohmann::json::parse(in);
  std::vector<ReportRow> rows;
  rows.reserve(arr.size());
  for (const auto& j : arr) {
    ReportRow r;
    r.algorithm = j.at("algorithm").get<std::string>();
    r.k = j.at("k").get<int>();
    r.d = j.at("d").get<int>();
    r.eps = j.at("eps").get<double>();
    r.delta = j.at("delta").get<double>();
    r.alpha = j.at("alpha").get<double>();
    r.preset = j.at("preset").get<std::string>();
    r.n_trials = j.at("n_trials").get<int>();
    r.success_rate = j.at("success_rate").get<double>();
    r.mean_max_error = j.at("mean_max_error").get<double>();
    r.total_samples_mean = j.at("total_samples_mean").get<double>();
    r.total_samples_predicted = j.at("total_samples_predicted").get<std::int64_t>();
    r.seed_base = j.at("seed_base").get<std::uint64_t>();
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace collabpac
