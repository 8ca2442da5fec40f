#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "collabpac/collab.hpp"
#include "collabpac/core.hpp"
#include "collabpac/instances.hpp"
#include "collabpac/oracle.hpp"

namespace collabpac {

enum class AgnosticVariant { NR1, NR2, NR1Avg, NR2Avg };

std::string to_string(AgnosticVariant variant);

// Parameters for the non-realizable algorithms. Each variant derives its own
// alpha' = alpha/divisor, eps' = eps/divisor, round count and per-player test
// size. The paper divisors (35/60, 40/64, 12/25, 15/29) put alpha'^3 or
// eps' alpha'^2 in the round-count denominator, which is far beyond desk
// scale, so the desk preset overrides the divisors with 4/8 and caps the
// round count; guarantees under that preset are validated empirically.
struct AgnosticConfig {
  double eps = 0.1;
  double delta = 0.1;
  double alpha = 0.5;
  std::string preset_name = "paper";
  std::optional<double> alpha_divisor_override;
  std::optional<double> eps_divisor_override;
  int round_cap = 0;  // 0 = uncapped
  SampleSizeConfig sizes{};

  static AgnosticConfig paper(double eps, double delta, double alpha);
  static AgnosticConfig desk(double eps, double delta, double alpha);

  static constexpr int kDeskRoundCap = 120;

  // Theorem preconditions: eps, delta in (0,1) and alpha in the variant's
  // admissible range (NR1: 7eps/6 < alpha < 1, NR2: 5eps/4 < alpha < 1,
  // NR1-AVG: 24eps/25 < alpha < 1, NR2-AVG: 30eps/29 < alpha < 1).
  void validate(AgnosticVariant variant) const;

  double alpha_divisor(AgnosticVariant variant) const;
  double eps_divisor(AgnosticVariant variant) const;
  double alpha_prime(AgnosticVariant variant) const;
  double eps_prime(AgnosticVariant variant) const;
  int rounds(AgnosticVariant variant, int k) const;
  double delta_prime(AgnosticVariant variant, int k) const;
  std::int64_t learn_sample_size(AgnosticVariant variant, int k, int d) const;
  std::int64_t test_sample_size(AgnosticVariant variant, int k) const;
};

// min(err_T * alpha'^2 / ((1+3 alpha') err_S + 3 eps'), alpha'). The
// denominator is bounded away from zero by 3 eps'.
double smooth_step_capped(double err_test, double err_sample, double alpha_prime,
                          double eps_prime);

// err_T * eps' * alpha' / ((1+3 alpha') err_S + 3 eps'), uncapped; always at
// most alpha'/3 since err_T <= 1.
double smooth_step_avg(double err_test, double err_sample, double alpha_prime,
                       double eps_prime);

// t rounds of: learn on the weighted mixture, ERM, per-player test draw,
// smooth multiplicative update w_i *= 1 + s_i. NR1/NR2 return the majority
// over the round classifiers, the AVG variants the uniform-average combiner.
RunResult run_agnostic(AgnosticVariant variant, const Instance& instance,
                       const AgnosticConfig& config, Rng& rng);

}  // namespace collabpac
