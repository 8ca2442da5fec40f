#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "collabpac/agnostic.hpp"
#include "collabpac/collab.hpp"
#include "collabpac/instances.hpp"
#include "collabpac/ledger.hpp"

namespace collabpac {

enum class AlgorithmTag { R1, R2, NR1, NR2, NR1Avg, NR2Avg, Naive };

std::string to_string(AlgorithmTag tag);
AlgorithmTag algorithm_from_string(const std::string& name);
bool is_realizable_algorithm(AlgorithmTag tag);
bool is_average_algorithm(AlgorithmTag tag);

// One experiment configuration covering every algorithm. The preset picks the
// published constants ("paper") or the CI-scale heuristics ("desk": R2 round
// multiplier 10; agnostic divisors 4/8 with a capped round count).
struct RunConfig {
  AlgorithmTag alg = AlgorithmTag::R1;
  double eps = 0.1;
  double delta = 0.1;
  double alpha = 0.0;  // agnostic variants only
  std::string preset = "paper";
  std::optional<int> agnostic_round_cap;  // overrides the preset cap
  SampleSizeConfig sizes{};

  RealizableConfig realizable_config() const;
  AgnosticConfig agnostic_config() const;
  void validate() const;
};

// Dispatches to run_r1 / run_r2 / run_agnostic. Not valid for Naive.
RunResult run_algorithm(const Instance& instance, const RunConfig& config,
                        std::uint64_t seed);

// Error level the algorithm promises with probability 1-delta: eps in the
// realizable setting, (2+alpha)OPT+eps for NR1/NR2, (1+alpha)OPT+eps for the
// average variants.
double guarantee_bound(const RunConfig& config, double opt);

// Every player learns alone: realizable_sample_size(eps, delta/k, d) draws
// from its own distribution, then ERM. The delta/k split makes "all players
// succeed" comparable with the collaborative guarantee.
struct NaiveResult {
  std::vector<Classifier> classifiers;  // one per player
  SampleLedger ledger;
};
NaiveResult naive_baseline(const Instance& instance, double eps, double delta,
                           const SampleSizeConfig& sizes = {}, std::uint64_t seed = 0);

// Closed-form count of every sample a run draws; a run's ledger grand total
// must equal this exactly.
std::int64_t predicted_totals(const RunConfig& config, int k, int d);

// Aggregate over seeded trials of one algorithm on one instance.
struct TrialStats {
  RunConfig config;
  int k = 0;
  int d = 0;
  double opt = 0.0;
  double bound = 0.0;
  int n_trials = 0;
  std::uint64_t base_seed = 0;
  std::vector<double> max_errors;        // per trial, max over players
  std::vector<std::int64_t> totals;      // per trial, ledger grand total
  int success_count = 0;

  double success_rate() const;
  double mean_max_error() const;
  double mean_total() const;
  std::int64_t max_total() const;
};

// Runs trials with seeds base_seed .. base_seed+n-1. Trials are independent;
// jobs > 1 executes them on worker threads and merges in trial order, so the
// result is identical for any jobs value.
TrialStats run_trials(const Instance& instance, const RunConfig& config, int n_trials,
                      std::uint64_t base_seed, int jobs = 1);

// One report line per (algorithm, instance, config) aggregate.
struct ReportRow {
  std::string algorithm;
  int k = 0;
  int d = 0;
  double eps = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  std::string preset;
  int n_trials = 0;
  double success_rate = 0.0;
  double mean_max_error = 0.0;
  double total_samples_mean = 0.0;
  std::int64_t total_samples_predicted = 0;
  std::uint64_t seed_base = 0;
};

ReportRow to_report_row(const TrialStats& stats);

void write_report_csv(const std::vector<ReportRow>& rows, std::ostream& out);
void write_report_json(const std::vector<ReportRow>& rows, std::ostream& out);
void write_report(const std::vector<ReportRow>& rows, const std::string& format,
                  const std::string& path);
std::vector<ReportRow> read_report_json(std::istream& in);

}  // namespace collabpac
