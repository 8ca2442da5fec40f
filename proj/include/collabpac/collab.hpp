#pragma once

#include <cstdint>
#include <vector>

#include "collabpac/core.hpp"
#include "collabpac/instances.hpp"
#include "collabpac/ledger.hpp"
#include "collabpac/oracle.hpp"

namespace collabpac {

// Player weights in the realizable algorithms. Updates only ever double, so
// each weight is stored as its doubling count: w_i = 2^doublings[i]. That
// keeps the reconstruction identity w_i = 2^{#failed rounds} exact and lets
// selection probabilities be normalized without overflow at any round count.
struct WeightState {
  std::vector<std::int32_t> doublings;
  int round = 0;

  static WeightState uniform(int k);

  int players() const { return static_cast<int>(doublings.size()); }
  double weight(int i) const;
  double potential() const;  // sum of weights
  // w_i / Phi for every player, computed relative to the max exponent.
  std::vector<double> selection_probs() const;
};

// eps/delta plus the constants the realizable algorithms fix internally:
// eps' = eps/6, the Test and FastTest sample multipliers, the learn-sample
// shrink (rounds learn to eps'/16), and R2's round multiplier. The desk
// preset only shortens R2's schedule; everything else is paper-faithful.
struct RealizableConfig {
  double eps = 0.1;
  double delta = 0.1;
  double test_constant = 32.0;
  double fasttest_constant = 148.0;
  double learn_shrink = 16.0;
  int r2_round_multiplier = 150;
  SampleSizeConfig sizes{};

  static RealizableConfig paper(double eps, double delta);
  static RealizableConfig desk(double eps, double delta);  // r2 multiplier 10

  void validate() const;

  double eps_prime() const { return eps / 6.0; }
  // t = 5 * ceil(log2(k)), with k clamped to 2 so one player still runs
  // enough rounds for a nonempty majority.
  int r1_rounds(int k) const;
  int r2_rounds(int k) const;  // multiplier * ceil(log2(k/delta))
  double r1_delta_prime(int k) const { return delta / (3.0 * r1_rounds(k)); }
  double r2_delta_prime(int k) const { return delta / (4.0 * r2_rounds(k)); }
  std::int64_t learn_sample_size(double delta_prime, int d) const;
  std::int64_t test_sample_size(int k, double delta_prime) const;
  std::int64_t fasttest_sample_size() const;
};

// Weighted mixture of the player distributions; sampling selects a player
// with probability w_i/Phi, then draws from that player's distribution.
struct MixtureDistribution {
  std::vector<double> selection_probs;
  const std::vector<DiscreteDistribution>* players = nullptr;
};

MixtureDistribution make_mixture(const WeightState& state,
                                 const std::vector<DiscreteDistribution>& players);

// The mixture as one flat distribution with merged atom masses. Used by the
// linearity checks; sampling goes through the two-stage path so draws are
// charged to the selected player.
DiscreteDistribution flatten(const MixtureDistribution& mixture);

// n two-stage draws; each is charged to the selected player under purpose
// Learn. Provenance of the returned set is "mixture".
SampleSet mixture_sample(const MixtureDistribution& mixture, std::int64_t n, Rng& rng,
                         SampleLedger& ledger, int round);

// The shared pass rule: empirical error at most (3/4) eps'.
bool passes_error_threshold(double empirical_err, double eps_prime);

// Per player, draws ceil((test_constant/eps') * ln(k/delta')) examples from
// D_i (purpose Test) and returns the pass flags {err_{T_i} <= 3/4 eps'}.
std::vector<std::uint8_t> test_procedure(const Classifier& classifier,
                                         const std::vector<DiscreteDistribution>& players,
                                         double eps_prime, double delta_prime,
                                         double test_constant, Rng& rng,
                                         SampleLedger& ledger, int round);

// Same pass rule with the cheaper per-player size ceil(fasttest_constant/eps').
std::vector<std::uint8_t> fast_test_procedure(
    const Classifier& classifier, const std::vector<DiscreteDistribution>& players,
    double eps_prime, double fasttest_constant, Rng& rng, SampleLedger& ledger,
    int round);

// Doubles the weight of every player that failed; round advances by one.
WeightState update_double(const WeightState& state,
                          const std::vector<std::uint8_t>& passed);

// One round of any of the algorithms, as recorded in the run trace.
struct RoundRecord {
  int hypothesis = -1;
  double erm_sample_error = 0.0;          // err_{S^(r)} of the round classifier
  std::vector<std::uint8_t> passed;       // realizable runs: G_r membership
  std::vector<double> steps;              // agnostic runs: s_i^(r)
  std::vector<double> player_errors;      // exact err_{D_i} of the round classifier
  std::int64_t learn_samples = 0;
  std::int64_t test_samples_per_player = 0;
};

struct RunResult {
  Classifier classifier;
  std::vector<RoundRecord> rounds;
  SampleLedger ledger;
  std::vector<std::int32_t> final_doublings;  // realizable runs only
  std::vector<double> final_weights;          // all runs
};

// t rounds of: learn on the weighted mixture, ERM, per-player Test, double
// the failed weights. Returns the majority over the round classifiers.
RunResult run_r1(const Instance& instance, const RealizableConfig& config, Rng& rng);

// As run_r1 with FastTest and the longer R2 round schedule.
RunResult run_r2(const Instance& instance, const RealizableConfig& config, Rng& rng);

}  // namespace collabpac
