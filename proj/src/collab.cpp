#include "collabpac/collab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace collabpac {

WeightState WeightState::uniform(int k) {
  if (k < 1) throw std::invalid_argument("WeightState: k must be >= 1");
  WeightState s;
  s.doublings.assign(static_cast<std::size_t>(k), 0);
  return s;
}

double WeightState::weight(int i) const {
  return std::exp2(static_cast<double>(doublings.at(static_cast<std::size_t>(i))));
}

double WeightState::potential() const {
  double phi = 0.0;
  for (std::int32_t e : doublings) phi += std::exp2(static_cast<double>(e));
  return phi;
}

std::vector<double> WeightState::selection_probs() const {
  const std::int32_t emax = *std::max_element(doublings.begin(), doublings.end());
  double norm = 0.0;
  std::vector<double> probs(doublings.size());
  for (std::size_t i = 0; i < doublings.size(); ++i) {
    probs[i] = std::exp2(static_cast<double>(doublings[i] - emax));
    norm += probs[i];
  }
  for (double& p : probs) p /= norm;
  return probs;
}

RealizableConfig RealizableConfig::paper(double eps, double delta) {
  RealizableConfig c;
  c.eps = eps;
  c.delta = delta;
  c.validate();
  return c;
}

RealizableConfig RealizableConfig::desk(double eps, double delta) {
  RealizableConfig c = paper(eps, delta);
  c.r2_round_multiplier = 10;
  return c;
}

void RealizableConfig::validate() const {
  if (!(eps > 0.0) || eps >= 1.0) throw std::invalid_argument("eps must lie in (0, 1)");
  if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(test_constant > 0.0) || !(fasttest_constant > 0.0) || !(learn_shrink >= 1.0)) {
    throw std::invalid_argument("test/fasttest constants must be > 0 and learn_shrink >= 1");
  }
  if (r2_round_multiplier < 1) throw std::invalid_argument("r2_round_multiplier must be >= 1");
}

int RealizableConfig::r1_rounds(int k) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const double lg = std::log2(static_cast<double>(std::max(k, 2)));
  return 5 * static_cast<int>(fuzzy_ceil(lg));
}

int RealizableConfig::r2_rounds(int k) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const double lg = std::log2(static_cast<double>(k) / delta);
  return r2_round_multiplier * static_cast<int>(std::max<std::int64_t>(1, fuzzy_ceil(lg)));
}

std::int64_t RealizableConfig::learn_sample_size(double delta_prime, int d) const {
  return realizable_sample_size(eps_prime() / learn_shrink, delta_prime, d, sizes);
}

std::int64_t RealizableConfig::test_sample_size(int k, double delta_prime) const {
  const double m = (test_constant / eps_prime()) *
                   std::log(static_cast<double>(k) / delta_prime);
  return std::max<std::int64_t>(1, fuzzy_ceil(m));
}

std::int64_t RealizableConfig::fasttest_sample_size() const {
  return std::max<std::int64_t>(1, fuzzy_ceil(fasttest_constant / eps_prime()));
}

MixtureDistribution make_mixture(const WeightState& state,
                                 const std::vector<DiscreteDistribution>& players) {
  if (players.empty() || players.size() != state.doublings.size()) {
    throw std::invalid_argument("make_mixture: weights and players disagree");
  }
  return MixtureDistribution{state.selection_probs(), &players};
}

DiscreteDistribution flatten(const MixtureDistribution& mixture) {
  const auto& players = *mixture.players;
  std::map<std::pair<Point, Label>, double> merged;
  for (std::size_t i = 0; i < players.size(); ++i) {
    for (const auto& a : players[i].atoms()) {
      merged[{a.point, a.label}] += mixture.selection_probs[i] * a.mass;
    }
  }
  std::vector<DiscreteDistribution::Atom> atoms;
  atoms.reserve(merged.size());
  for (const auto& [key, mass] : merged) {
    atoms.push_back({key.first, key.second, mass});
  }
  return DiscreteDistribution(players.front().domain_size(), std::move(atoms));
}

namespace {

// Index of the selected player for one mixture draw.
std::size_t select_player(const std::vector<double>& probs, Rng& rng) {
  const double u = rng.next_unit();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return probs.size() - 1;
}

}  // namespace

SampleSet mixture_sample(const MixtureDistribution& mixture, std::int64_t n, Rng& rng,
                         SampleLedger& ledger, int round) {
  if (n < 1) throw std::invalid_argument("mixture_sample: n must be >= 1");
  if (mixture.players == nullptr || mixture.selection_probs.empty()) {
    throw std::invalid_argument("mixture_sample: empty mixture");
  }
  SampleSet set;
  set.provenance = SampleSet::kMixture;
  set.examples.reserve(static_cast<std::size_t>(n));
  std::vector<std::int64_t> per_player(mixture.selection_probs.size(), 0);
  for (std::int64_t j = 0; j < n; ++j) {
    const std::size_t i = select_player(mixture.selection_probs, rng);
    set.examples.push_back((*mixture.players)[i].sample(rng));
    per_player[i] += 1;
  }
  for (std::size_t i = 0; i < per_player.size(); ++i) {
    ledger.charge(static_cast<int>(i), round, SamplePurpose::Learn, per_player[i]);
  }
  return set;
}

bool passes_error_threshold(double empirical_err, double eps_prime) {
  return empirical_err <= 0.75 * eps_prime;
}

namespace {

std::vector<std::uint8_t> screen_players(const Classifier& classifier,
                                         const std::vector<DiscreteDistribution>& players,
                                         double eps_prime, std::int64_t per_player,
                                         Rng& rng, SampleLedger& ledger, int round) {
  std::vector<std::uint8_t> passed(players.size(), 0);
  for (std::size_t i = 0; i < players.size(); ++i) {
    std::int64_t wrong = 0;
    for (std::int64_t j = 0; j < per_player; ++j) {
      const LabeledExample e = players[i].sample(rng);
      wrong += classifier.evaluate(e.point) != e.label;
    }
    ledger.charge(static_cast<int>(i), round, SamplePurpose::Test, per_player);
    const double err = static_cast<double>(wrong) / static_cast<double>(per_player);
    passed[i] = passes_error_threshold(err, eps_prime) ? 1 : 0;
  }
  return passed;
}

}  // namespace

std::vector<std::uint8_t> test_procedure(const Classifier& classifier,
                                         const std::vector<DiscreteDistribution>& players,
                                         double eps_prime, double delta_prime,
                                         double test_constant, Rng& rng,
                                         SampleLedger& ledger, int round) {
  if (!(eps_prime > 0.0) || eps_prime >= 1.0 || !(delta_prime > 0.0) || delta_prime >= 1.0) {
    throw std::invalid_argument("test_procedure: eps' and delta' must lie in (0, 1)");
  }
  const double m = (test_constant / eps_prime) *
                   std::log(static_cast<double>(players.size()) / delta_prime);
  const auto per_player = std::max<std::int64_t>(1, fuzzy_ceil(m));
  return screen_players(classifier, players, eps_prime, per_player, rng, ledger, round);
}

std::vector<std::uint8_t> fast_test_procedure(
    const Classifier& classifier, const std::vector<DiscreteDistribution>& players,
    double eps_prime, double fasttest_constant, Rng& rng, SampleLedger& ledger,
    int round) {
  if (!(eps_prime > 0.0) || eps_prime >= 1.0) {
    throw std::invalid_argument("fast_test_procedure: eps' must lie in (0, 1)");
  }
  const auto per_player =
      std::max<std::int64_t>(1, fuzzy_ceil(fasttest_constant / eps_prime));
  return screen_players(classifier, players, eps_prime, per_player, rng, ledger, round);
}

WeightState update_double(const WeightState& state,
                          const std::vector<std::uint8_t>& passed) {
  if (passed.size() != state.doublings.size()) {
    throw std::invalid_argument("update_double: pass set size mismatch");
  }
  WeightState next = state;
  for (std::size_t i = 0; i < passed.size(); ++i) {
    if (!passed[i]) next.doublings[i] += 1;
  }
  next.round = state.round + 1;
  return next;
}

namespace {

RunResult run_realizable(const Instance& instance, const RealizableConfig& config,
                         Rng& rng, bool fast_test) {
  config.validate();
  const int k = instance.k;
  const int d = instance.concept_class.vc_dim();
  const int t = fast_test ? config.r2_rounds(k) : config.r1_rounds(k);
  const double delta_prime =
      fast_test ? config.r2_delta_prime(k) : config.r1_delta_prime(k);
  const std::int64_t learn_size = config.learn_sample_size(delta_prime, d);

  WeightState state = WeightState::uniform(k);
  RunResult result;
  result.rounds.reserve(static_cast<std::size_t>(t));
  std::vector<Classifier> round_classifiers;
  round_classifiers.reserve(static_cast<std::size_t>(t));

  for (int r = 0; r < t; ++r) {
    const MixtureDistribution mixture = make_mixture(state, instance.distributions);
    const SampleSet learn =
        mixture_sample(mixture, learn_size, rng, result.ledger, r);
    const std::size_t hyp = erm(instance.concept_class, learn);
    const Classifier f = instance.concept_class.classifier(hyp);

    const std::vector<std::uint8_t> passed =
        fast_test ? fast_test_procedure(f, instance.distributions, config.eps_prime(),
                                        config.fasttest_constant, rng, result.ledger, r)
                  : test_procedure(f, instance.distributions, config.eps_prime(),
                                   delta_prime, config.test_constant, rng,
                                   result.ledger, r);

    RoundRecord record;
    record.hypothesis = static_cast<int>(hyp);
    record.erm_sample_error = empirical_error(f, learn);
    record.passed = passed;
    record.player_errors.reserve(static_cast<std::size_t>(k));
    for (const DiscreteDistribution& dist : instance.distributions) {
      record.player_errors.push_back(exact_error(f, dist));
    }
    record.learn_samples = learn_size;
    record.test_samples_per_player = fast_test
                                         ? config.fasttest_sample_size()
                                         : config.test_sample_size(k, delta_prime);
    result.rounds.push_back(std::move(record));
    round_classifiers.push_back(f);

    state = update_double(state, passed);
  }

  result.classifier = Classifier::majority(std::move(round_classifiers));
  result.final_doublings = state.doublings;
  result.final_weights.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) result.final_weights.push_back(state.weight(i));
  return result;
}

}  // namespace

RunResult run_r1(const Instance& instance, const RealizableConfig& config, Rng& rng) {
  return run_realizable(instance, config, rng, /*fast_test=*/false);
}

RunResult run_r2(const Instance& instance, const RealizableConfig& config, Rng& rng) {
  return run_realizable(instance, config, rng, /*fast_test=*/true);
}

}  // namespace collabpac
