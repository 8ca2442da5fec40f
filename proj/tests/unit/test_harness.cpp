#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "collabpac/harness.hpp"

using namespace collabpac;

namespace {

Instance single_hypothesis_instance(int k) {
  std::vector<DiscreteDistribution> dists;
  for (int i = 0; i < k; ++i) {
    dists.emplace_back(2, std::vector<DiscreteDistribution::Atom>{{0, 1, 0.6}, {1, 0, 0.4}});
  }
  return Instance{k, std::move(dists), ConceptClass(2, {{1, 0}}, 1), 0, 0.0};
}

RunConfig config_for(AlgorithmTag alg, double eps, double delta, double alpha = 0.0,
                     const std::string& preset = "paper") {
  RunConfig c;
  c.alg = alg;
  c.eps = eps;
  c.delta = delta;
  c.alpha = alpha;
  c.preset = preset;
  return c;
}

}  // namespace

TEST_CASE("algorithm tags round-trip through their names") {
  for (auto tag : {AlgorithmTag::R1, AlgorithmTag::R2, AlgorithmTag::NR1,
                   AlgorithmTag::NR2, AlgorithmTag::NR1Avg, AlgorithmTag::NR2Avg,
                   AlgorithmTag::Naive}) {
    CHECK(algorithm_from_string(to_string(tag)) == tag);
  }
  CHECK_THROWS_AS(algorithm_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("guarantee bounds per algorithm family") {
  CHECK(guarantee_bound(config_for(AlgorithmTag::R1, 0.2, 0.1), 0.05) == 0.2);
  CHECK(guarantee_bound(config_for(AlgorithmTag::NR1, 0.1, 0.1, 0.5), 0.05) ==
        doctest::Approx(2.5 * 0.05 + 0.1));
  CHECK(guarantee_bound(config_for(AlgorithmTag::NR2Avg, 0.1, 0.1, 0.5), 0.05) ==
        doctest::Approx(1.5 * 0.05 + 0.1));
}

TEST_CASE("predicted totals match the hand-evaluated closed form") {
  // R1, k=16, eps=0.6, delta=0.06, d=4: t=20, test 3098 per player per round
  const RunConfig config = config_for(AlgorithmTag::R1, 0.6, 0.06);
  const RealizableConfig c = config.realizable_config();
  const int t = c.r1_rounds(16);
  REQUIRE(t == 20);
  const double dp = c.r1_delta_prime(16);
  CHECK(c.test_sample_size(16, dp) == 3098);
  CHECK(static_cast<std::int64_t>(t) * 16 * c.test_sample_size(16, dp) == 991360);
  CHECK(c.learn_sample_size(dp, 4) == 4354);
  CHECK(predicted_totals(config, 16, 4) == 991360 + 20 * 4354);
}

TEST_CASE("naive baseline draws exactly k * m samples") {
  const Instance inst = make_hard_instance(2, 0.25, 3);
  const NaiveResult naive = naive_baseline(inst, 0.2, 0.1, {}, 5);
  const std::int64_t per_player = realizable_sample_size(0.2, 0.05, 2);
  CHECK(naive.ledger.total() == 2 * per_player);
  CHECK(naive.ledger.player_total(0) == per_player);
  CHECK(predicted_totals(config_for(AlgorithmTag::Naive, 0.2, 0.1), 2, 2) ==
        2 * per_player);
}

TEST_CASE("naive baseline learns each player's own task") {
  const Instance inst = make_hard_instance(2, 0.25, 7);
  const RunConfig config = config_for(AlgorithmTag::Naive, 0.2, 0.1);
  const TrialStats stats = run_trials(inst, config, 50, 7);
  CHECK(stats.success_count >= 45);  // 1 - delta with binomial slack

  // k = 1 reduces to plain PAC learning
  const Instance solo = make_hard_instance(1, 0.25, 7);
  const TrialStats solo_stats = run_trials(solo, config, 20, 7);
  CHECK(solo_stats.success_count >= 18);
}

TEST_CASE("run_trials on a single-hypothesis class always succeeds") {
  const Instance inst = single_hypothesis_instance(2);
  for (auto tag : {AlgorithmTag::R1, AlgorithmTag::Naive}) {
    const TrialStats stats = run_trials(inst, config_for(tag, 0.2, 0.1), 5, 1);
    CHECK(stats.success_rate() == 1.0);
    CHECK(stats.mean_max_error() == 0.0);
  }
}

TEST_CASE("trials are reproducible and ledger totals match predictions") {
  const Instance inst = make_hard_instance(2, 0.25, 7);
  const RunConfig config = config_for(AlgorithmTag::R1, 0.2, 0.1);
  const TrialStats a = run_trials(inst, config, 6, 7);
  const TrialStats b = run_trials(inst, config, 6, 7);
  CHECK(a.max_errors == b.max_errors);
  CHECK(a.totals == b.totals);
  CHECK(a.success_count == b.success_count);

  const std::int64_t predicted = predicted_totals(config, inst.k, 2);
  for (std::int64_t total : a.totals) CHECK(total == predicted);
}

TEST_CASE("parallel trials merge identically to sequential ones") {
  const Instance inst = make_hard_instance(2, 0.25, 7);
  const RunConfig config = config_for(AlgorithmTag::R1, 0.3, 0.2);
  const TrialStats seq = run_trials(inst, config, 8, 3, 1);
  const TrialStats par = run_trials(inst, config, 8, 3, 4);
  CHECK(seq.max_errors == par.max_errors);
  CHECK(seq.totals == par.totals);
}

TEST_CASE("report rows serialize exactly") {
  ReportRow row;
  row.algorithm = "r1";
  row.k = 2;
  row.d = 2;
  row.eps = 0.2;
  row.delta = 0.1;
  row.alpha = 0.0;
  row.preset = "paper";
  row.n_trials = 50;
  row.success_rate = 1.0;
  row.mean_max_error = 0.0123456789;
  row.total_samples_mean = 96110.0;
  row.total_samples_predicted = 96110;
  row.seed_base = 7;

  std::ostringstream csv;
  write_report_csv({row}, csv);
  CHECK(csv.str() ==
        "algorithm,k,d,eps,delta,alpha,preset,n_trials,success_rate,mean_max_error,"
        "total_samples_mean,total_samples_predicted,seed_base\n"
        "r1,2,2,0.2,0.1,0,paper,50,1,0.0123456789,96110,96110,7\n");

  std::ostringstream empty;
  write_report_csv({}, empty);
  CHECK(empty.str() ==
        "algorithm,k,d,eps,delta,alpha,preset,n_trials,success_rate,mean_max_error,"
        "total_samples_mean,total_samples_predicted,seed_base\n");
}

TEST_CASE("json reports round-trip") {
  ReportRow row;
  row.algorithm = "nr1-avg";
  row.k = 4;
  row.d = 4;
  row.eps = 0.1;
  row.delta = 0.1;
  row.alpha = 0.5;
  row.preset = "desk";
  row.n_trials = 30;
  row.success_rate = 28.0 / 30.0;
  row.mean_max_error = 0.0731234561234;
  row.total_samples_mean = 3695632.5;
  row.total_samples_predicted = 3695633;
  row.seed_base = 11;

  std::stringstream buffer;
  write_report_json({row}, buffer);
  const std::vector<ReportRow> loaded = read_report_json(buffer);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].algorithm == row.algorithm);
  CHECK(loaded[0].k == row.k);
  CHECK(loaded[0].preset == row.preset);
  CHECK(loaded[0].n_trials == row.n_trials);
  CHECK(loaded[0].total_samples_predicted == row.total_samples_predicted);
  CHECK(loaded[0].seed_base == row.seed_base);
  // floats are projected to 9 significant digits on write
  CHECK(loaded[0].success_rate == doctest::Approx(row.success_rate).epsilon(1e-8));
  CHECK(loaded[0].mean_max_error == doctest::Approx(row.mean_max_error).epsilon(1e-8));

  // a second write of the loaded rows is byte-identical
  std::ostringstream first, second;
  write_report_json(loaded, first);
  write_report_json(read_report_json(buffer = std::stringstream(first.str())), second);
  CHECK(first.str() == second.str());
}

TEST_CASE("predicted totals shape over the k grid") {
  // fixed eps=0.2, delta=0.1, d=8: R1/R2 ratio is nondecreasing in k
  double prev_ratio = 0.0;
  for (int k : {4, 8, 16, 32}) {
    const auto r1 = static_cast<double>(
        predicted_totals(config_for(AlgorithmTag::R1, 0.2, 0.1), k, 8));
    const auto r2 = static_cast<double>(
        predicted_totals(config_for(AlgorithmTag::R2, 0.2, 0.1), k, 8));
    const double ratio = r1 / r2;
    CHECK(ratio >= prev_ratio);
    prev_ratio = ratio;
  }
}

TEST_CASE("report write failures carry the path") {
  try {
    write_report({}, "csv", "/nonexistent-dir/report.csv");
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/report.csv") != std::string::npos);
  }
  CHECK_THROWS_AS(write_report({}, "xml", "out.txt"), std::invalid_argument);
}

TEST_CASE("run_trials rejects bad arguments") {
  const Instance inst = single_hypothesis_instance(1);
  CHECK_THROWS_AS(run_trials(inst, config_for(AlgorithmTag::R1, 0.2, 0.1), 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_trials(inst, config_for(AlgorithmTag::NR1, 0.1, 0.1, 0.05), 1, 1),
                  std::invalid_argument);
}
