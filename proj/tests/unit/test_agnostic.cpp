#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "collabpac/agnostic.hpp"

using namespace collabpac;

TEST_CASE("smooth capped step") {
  CHECK(smooth_step_capped(0.0, 0.3, 0.02, 0.01) == 0.0);
  // raw value 0.0004/0.03 stays below the cap
  CHECK(smooth_step_capped(1.0, 0.0, 0.02, 0.01) ==
        doctest::Approx(0.0004 / 0.03).epsilon(1e-12));
  // raw value 0.0004/0.003 = 0.1333 hits the cap
  CHECK(smooth_step_capped(1.0, 0.0, 0.02, 0.001) == doctest::Approx(0.02));
}

TEST_CASE("smooth average step") {
  CHECK(smooth_step_avg(0.0, 0.5, 0.02, 0.01) == 0.0);
  // err_T = 1, err_S = 0 simplifies to alpha'/3
  CHECK(smooth_step_avg(1.0, 0.0, 0.03, 0.01) == doctest::Approx(0.01));
  // monotone in err_T
  double prev = -1.0;
  for (double err_t : {0.0, 0.2, 0.5, 0.8, 1.0}) {
    const double s = smooth_step_avg(err_t, 1.0, 0.05, 0.02);
    CHECK(s >= prev);
    prev = s;
  }
  // never exceeds alpha'/3
  for (double err_s : {0.0, 0.1, 0.9}) {
    CHECK(smooth_step_avg(1.0, err_s, 0.05, 0.02) <= 0.05 / 3.0 + 1e-15);
  }
}

TEST_CASE("variant constants follow the published divisors") {
  const AgnosticConfig cfg = AgnosticConfig::paper(0.1, 0.1, 0.5);
  CHECK(cfg.alpha_prime(AgnosticVariant::NR1) == doctest::Approx(0.5 / 35));
  CHECK(cfg.eps_prime(AgnosticVariant::NR1) == doctest::Approx(0.1 / 60));
  CHECK(cfg.alpha_prime(AgnosticVariant::NR2) == doctest::Approx(0.5 / 40));
  CHECK(cfg.eps_prime(AgnosticVariant::NR2) == doctest::Approx(0.1 / 64));
  CHECK(cfg.alpha_prime(AgnosticVariant::NR1Avg) == doctest::Approx(0.5 / 12));
  CHECK(cfg.eps_prime(AgnosticVariant::NR1Avg) == doctest::Approx(0.1 / 25));
  CHECK(cfg.alpha_prime(AgnosticVariant::NR2Avg) == doctest::Approx(0.5 / 15));
  CHECK(cfg.eps_prime(AgnosticVariant::NR2Avg) == doctest::Approx(0.1 / 29));
}

TEST_CASE("desk preset shortens the schedule") {
  AgnosticConfig desk = AgnosticConfig::desk(0.1, 0.1, 0.5);
  CHECK(desk.alpha_prime(AgnosticVariant::NR1) == doctest::Approx(0.125));
  CHECK(desk.eps_prime(AgnosticVariant::NR1) == doctest::Approx(0.0125));
  // 2 ceil(ln(4)/0.125^3) = 1420, capped at the desk default
  CHECK(desk.rounds(AgnosticVariant::NR1, 4) == AgnosticConfig::kDeskRoundCap);
  desk.round_cap = 0;
  CHECK(desk.rounds(AgnosticVariant::NR1, 4) == 1420);
  desk.round_cap = 40;
  CHECK(desk.rounds(AgnosticVariant::NR1, 4) == 40);
  // delta' tracks the capped round count
  CHECK(desk.delta_prime(AgnosticVariant::NR1, 4) == doctest::Approx(0.1 / 160.0));
}

TEST_CASE("round schedules stay at least 1 and clamp single players") {
  AgnosticConfig desk = AgnosticConfig::desk(0.2, 0.1, 0.9);
  CHECK(desk.rounds(AgnosticVariant::NR1, 1) >= 1);
  CHECK(desk.rounds(AgnosticVariant::NR1, 1) == desk.rounds(AgnosticVariant::NR1, 2));
}

TEST_CASE("alpha must lie in the variant's admissible range") {
  // 7 eps/6 = 0.1167 > 0.05
  CHECK_THROWS_AS(AgnosticConfig::paper(0.1, 0.1, 0.05).validate(AgnosticVariant::NR1),
                  std::invalid_argument);
  CHECK_THROWS_AS(AgnosticConfig::paper(0.1, 0.1, 0.12).validate(AgnosticVariant::NR2),
                  std::invalid_argument);
  CHECK_NOTHROW(AgnosticConfig::paper(0.1, 0.1, 0.12).validate(AgnosticVariant::NR1));
  CHECK_NOTHROW(AgnosticConfig::paper(0.1, 0.1, 0.0965).validate(AgnosticVariant::NR1Avg));
  CHECK_THROWS_AS(AgnosticConfig::paper(0.1, 0.1, 0.095).validate(AgnosticVariant::NR1Avg),
                  std::invalid_argument);
  CHECK_THROWS_AS(AgnosticConfig::paper(0.1, 0.1, 1.0).validate(AgnosticVariant::NR1),
                  std::invalid_argument);
  CHECK_THROWS_AS(AgnosticConfig::paper(0.1, 0.1, 0.102).validate(AgnosticVariant::NR2Avg),
                  std::invalid_argument);
  CHECK_NOTHROW(AgnosticConfig::paper(0.1, 0.1, 0.104).validate(AgnosticVariant::NR2Avg));
}

TEST_CASE("paper-faithful schedules refuse to run past the weight range") {
  const Instance inst = make_noisy_instance(2, 2, 0.05, 3);
  const AgnosticConfig paper = AgnosticConfig::paper(0.1, 0.1, 0.5);
  Rng rng(1);
  CHECK_THROWS_AS(run_agnostic(AgnosticVariant::NR1, inst, paper, rng),
                  std::invalid_argument);
}

namespace {

AgnosticConfig quick_desk(double eps, double delta, double alpha, int cap) {
  AgnosticConfig cfg = AgnosticConfig::desk(eps, delta, alpha);
  cfg.round_cap = cap;
  return cfg;
}

double max_player_error(const Classifier& f, const Instance& inst) {
  double worst = 0.0;
  for (const auto& dist : inst.distributions) {
    worst = std::max(worst, exact_error(f, dist));
  }
  return worst;
}

}  // namespace

TEST_CASE("agnostic run on a single-hypothesis realizable class is perfect") {
  std::vector<DiscreteDistribution> dists;
  for (int i = 0; i < 2; ++i) {
    dists.emplace_back(2, std::vector<DiscreteDistribution::Atom>{{0, 1, 0.5}, {1, 0, 0.5}});
  }
  const Instance inst{2, std::move(dists), ConceptClass(2, {{1, 0}}, 1), 0, 0.0};
  Rng rng(5);
  const RunResult result =
      run_agnostic(AgnosticVariant::NR1, inst, quick_desk(0.1, 0.1, 0.5, 20), rng);
  CHECK(max_player_error(result.classifier, inst) == 0.0);
  for (const RoundRecord& round : result.rounds) {
    for (double s : round.steps) CHECK(s == 0.0);
  }
}

TEST_CASE("trace identities hold for capped variants") {
  const Instance inst = make_noisy_instance(3, 3, 0.05, 9);
  const AgnosticConfig cfg = quick_desk(0.1, 0.1, 0.5, 40);
  Rng rng(2);
  const RunResult result = run_agnostic(AgnosticVariant::NR2, inst, cfg, rng);
  const double alpha_p = cfg.alpha_prime(AgnosticVariant::NR2);

  REQUIRE(result.rounds.size() == 40);
  std::vector<double> reconstructed(3, 1.0);
  std::vector<double> step_sums(3, 0.0);
  for (const RoundRecord& round : result.rounds) {
    REQUIRE(round.steps.size() == 3);
    for (int i = 0; i < 3; ++i) {
      const double s = round.steps[static_cast<std::size_t>(i)];
      CHECK(s >= 0.0);
      CHECK(s <= alpha_p + 1e-15);
      reconstructed[static_cast<std::size_t>(i)] *= 1.0 + s;
      step_sums[static_cast<std::size_t>(i)] += s;
    }
  }
  double phi = 0.0;
  for (int i = 0; i < 3; ++i) {
    CHECK(result.final_weights[static_cast<std::size_t>(i)] ==
          doctest::Approx(reconstructed[static_cast<std::size_t>(i)]).epsilon(1e-9));
    phi += result.final_weights[static_cast<std::size_t>(i)];
  }
  // sum of steps <= ln(Phi_t) / (1 - alpha'/2)
  for (int i = 0; i < 3; ++i) {
    CHECK(step_sums[static_cast<std::size_t>(i)] <=
          std::log(phi) / (1.0 - alpha_p / 2.0) + 1e-9);
  }
}

TEST_CASE("capped-variant potential growth per round") {
  const Instance inst = make_noisy_instance(4, 4, 0.05, 7);
  const AgnosticConfig cfg = quick_desk(0.1, 0.1, 0.5, 30);
  const double alpha_p = cfg.alpha_prime(AgnosticVariant::NR1);

  int rounds_total = 0;
  int rounds_tight = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Rng rng(seed);
    const RunResult result = run_agnostic(AgnosticVariant::NR1, inst, cfg, rng);
    std::vector<double> weights(static_cast<std::size_t>(inst.k), 1.0);
    for (const RoundRecord& round : result.rounds) {
      double phi_before = 0.0, phi_after = 0.0;
      for (int i = 0; i < inst.k; ++i) {
        phi_before += weights[static_cast<std::size_t>(i)];
        weights[static_cast<std::size_t>(i)] *= 1.0 + round.steps[static_cast<std::size_t>(i)];
        phi_after += weights[static_cast<std::size_t>(i)];
      }
      // structural bound from s <= alpha', every round
      CHECK(phi_after <= phi_before * (1.0 + alpha_p) * (1.0 + 1e-12));
      ++rounds_total;
      if (phi_after <= phi_before * (1.0 + alpha_p * alpha_p) * (1.0 + 1e-12)) ++rounds_tight;
    }
  }
  // the tight bound is the typical behaviour, not a per-round certainty
  CHECK(rounds_tight >= (9 * rounds_total) / 10);
}

TEST_CASE("average variants report steps within alpha'/3") {
  const Instance inst = make_noisy_instance(2, 2, 0.05, 21);
  const AgnosticConfig cfg = quick_desk(0.1, 0.1, 0.5, 30);
  Rng rng(3);
  const RunResult result = run_agnostic(AgnosticVariant::NR1Avg, inst, cfg, rng);
  const double bound = cfg.alpha_prime(AgnosticVariant::NR1Avg) / 3.0;
  for (const RoundRecord& round : result.rounds) {
    for (double s : round.steps) {
      CHECK(s >= 0.0);
      CHECK(s <= bound + 1e-15);
    }
  }
}

TEST_CASE("average combiner output equals the mean of the round errors") {
  const Instance inst = make_noisy_instance(3, 3, 0.1, 14);
  Rng rng(6);
  const RunResult result =
      run_agnostic(AgnosticVariant::NR2Avg, inst, quick_desk(0.1, 0.1, 0.5, 25), rng);
  REQUIRE(result.classifier.kind() == Classifier::Kind::UniformAverage);
  for (int i = 0; i < inst.k; ++i) {
    double mean = 0.0;
    for (const RoundRecord& round : result.rounds) {
      mean += round.player_errors[static_cast<std::size_t>(i)];
    }
    mean /= static_cast<double>(result.rounds.size());
    CHECK(exact_error(result.classifier, inst.distributions[static_cast<std::size_t>(i)]) ==
          doctest::Approx(mean).epsilon(1e-12));
  }
}

TEST_CASE("agnostic guarantees hold on the noisy instance at desk scale") {
  const Instance inst = make_noisy_instance(4, 4, 0.05, 7);
  REQUIRE(inst.opt == doctest::Approx(0.05).epsilon(1e-10));
  const AgnosticConfig cfg = quick_desk(0.1, 0.1, 0.5, 40);

  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Rng rng(seed);
    const RunResult nr1 = run_agnostic(AgnosticVariant::NR1, inst, cfg, rng);
    CHECK(max_player_error(nr1.classifier, inst) <= (2.0 + 0.5) * inst.opt + 0.1);
  }
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Rng rng(seed);
    const RunResult avg = run_agnostic(AgnosticVariant::NR1Avg, inst, cfg, rng);
    CHECK(max_player_error(avg.classifier, inst) <= (1.0 + 0.5) * inst.opt + 0.1);
  }
}

TEST_CASE("agnostic runs are deterministic given the seed") {
  const Instance inst = make_noisy_instance(2, 2, 0.05, 30);
  const AgnosticConfig cfg = quick_desk(0.1, 0.1, 0.5, 15);
  Rng rng_a(9), rng_b(9);
  const RunResult a = run_agnostic(AgnosticVariant::NR1, inst, cfg, rng_a);
  const RunResult b = run_agnostic(AgnosticVariant::NR1, inst, cfg, rng_b);
  CHECK(a.ledger == b.ledger);
  CHECK(a.final_weights == b.final_weights);
  REQUIRE(a.rounds.size() == b.rounds.size());
  for (std::size_t r = 0; r < a.rounds.size(); ++r) {
    CHECK(a.rounds[r].hypothesis == b.rounds[r].hypothesis);
    CHECK(a.rounds[r].steps == b.rounds[r].steps);
  }
}
