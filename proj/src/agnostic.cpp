#include "collabpac/agnostic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace collabpac {

std::string to_string(AgnosticVariant variant) {
  switch (variant) {
    case AgnosticVariant::NR1: return "nr1";
    case AgnosticVariant::NR2: return "nr2";
    case AgnosticVariant::NR1Avg: return "nr1-avg";
    case AgnosticVariant::NR2Avg: return "nr2-avg";
  }
  throw std::logic_error("to_string: bad AgnosticVariant");
}

AgnosticConfig AgnosticConfig::paper(double eps, double delta, double alpha) {
  AgnosticConfig c;
  c.eps = eps;
  c.delta = delta;
  c.alpha = alpha;
  c.preset_name = "paper";
  return c;
}

AgnosticConfig AgnosticConfig::desk(double eps, double delta, double alpha) {
  AgnosticConfig c = paper(eps, delta, alpha);
  c.preset_name = "desk";
  c.alpha_divisor_override = 4.0;
  c.eps_divisor_override = 8.0;
  c.round_cap = kDeskRoundCap;
  return c;
}

void AgnosticConfig::validate(AgnosticVariant variant) const {
  if (!(eps > 0.0) || eps >= 1.0) throw std::invalid_argument("eps must lie in (0, 1)");
  if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("delta must lie in (0, 1)");
  double lower = 0.0;
  switch (variant) {
    case AgnosticVariant::NR1: lower = 7.0 * eps / 6.0; break;
    case AgnosticVariant::NR2: lower = 5.0 * eps / 4.0; break;
    case AgnosticVariant::NR1Avg: lower = 24.0 * eps / 25.0; break;
    case AgnosticVariant::NR2Avg: lower = 30.0 * eps / 29.0; break;
  }
  if (!(alpha > lower) || !(alpha < 1.0)) {
    throw std::invalid_argument("alpha outside the admissible range for " +
                                to_string(variant) + ": need " + std::to_string(lower) +
                                " < alpha < 1");
  }
  if (alpha_divisor_override && !(*alpha_divisor_override >= 1.0)) {
    throw std::invalid_argument("alpha divisor override must be >= 1");
  }
  if (eps_divisor_override && !(*eps_divisor_override >= 1.0)) {
    throw std::invalid_argument("eps divisor override must be >= 1");
  }
  if (round_cap < 0) throw std::invalid_argument("round_cap must be >= 0");
}

double AgnosticConfig::alpha_divisor(AgnosticVariant variant) const {
  if (alpha_divisor_override) return *alpha_divisor_override;
  switch (variant) {
    case AgnosticVariant::NR1: return 35.0;
    case AgnosticVariant::NR2: return 40.0;
    case AgnosticVariant::NR1Avg: return 12.0;
    case AgnosticVariant::NR2Avg: return 15.0;
  }
  throw std::logic_error("alpha_divisor: bad variant");
}

double AgnosticConfig::eps_divisor(AgnosticVariant variant) const {
  if (eps_divisor_override) return *eps_divisor_override;
  switch (variant) {
    case AgnosticVariant::NR1: return 60.0;
    case AgnosticVariant::NR2: return 64.0;
    case AgnosticVariant::NR1Avg: return 25.0;
    case AgnosticVariant::NR2Avg: return 29.0;
  }
  throw std::logic_error("eps_divisor: bad variant");
}

double AgnosticConfig::alpha_prime(AgnosticVariant variant) const {
  return alpha / alpha_divisor(variant);
}

double AgnosticConfig::eps_prime(AgnosticVariant variant) const {
  return eps / eps_divisor(variant);
}

int AgnosticConfig::rounds(AgnosticVariant variant, int k) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const double ap = alpha_prime(variant);
  const double ep = eps_prime(variant);
  // k clamps to 2 in the ln(k) schedules so a single player still gets a
  // nonempty round list.
  const double ln_k = std::log(static_cast<double>(std::max(k, 2)));
  const double ln_k_delta = std::log(4.0 * static_cast<double>(k) / delta);
  double raw = 0.0;
  switch (variant) {
    case AgnosticVariant::NR1: raw = ln_k / (ap * ap * ap); break;
    case AgnosticVariant::NR2: raw = ln_k_delta / (ap * ap * ap); break;
    case AgnosticVariant::NR1Avg: raw = ln_k / (ep * ap * ap); break;
    case AgnosticVariant::NR2Avg: raw = ln_k_delta / (ep * ap * ap); break;
  }
  const std::int64_t t = 2 * fuzzy_ceil(raw);
  if (t > 2000000000) throw std::invalid_argument("round schedule overflows an int");
  int rounds = std::max(1, static_cast<int>(t));
  if (round_cap > 0) rounds = std::min(rounds, round_cap);
  return rounds;
}

double AgnosticConfig::delta_prime(AgnosticVariant variant, int k) const {
  return delta / (4.0 * rounds(variant, k));
}

std::int64_t AgnosticConfig::learn_sample_size(AgnosticVariant variant, int k,
                                               int d) const {
  return agnostic_sample_size(eps_prime(variant), delta_prime(variant, k),
                              alpha_prime(variant), d, sizes);
}

std::int64_t AgnosticConfig::test_sample_size(AgnosticVariant variant, int k) const {
  const double ap = alpha_prime(variant);
  const double ep = eps_prime(variant);
  double m = 0.0;
  switch (variant) {
    case AgnosticVariant::NR1:
    case AgnosticVariant::NR1Avg:
      m = (3.0 / (ep * ap)) *
          std::log(static_cast<double>(k) / delta_prime(variant, k));
      break;
    case AgnosticVariant::NR2:
      m = (6.0 / (ep * ap)) * std::log(std::sqrt(2.0) / ap);
      break;
    case AgnosticVariant::NR2Avg:
      m = (3.0 / (ep * ap)) * std::log(2.0 / (ep * ap));
      break;
  }
  return std::max<std::int64_t>(1, fuzzy_ceil(m));
}

double smooth_step_capped(double err_test, double err_sample, double alpha_prime,
                          double eps_prime) {
  const double raw = err_test * alpha_prime * alpha_prime /
                     ((1.0 + 3.0 * alpha_prime) * err_sample + 3.0 * eps_prime);
  return std::min(raw, alpha_prime);
}

double smooth_step_avg(double err_test, double err_sample, double alpha_prime,
                       double eps_prime) {
  return err_test * eps_prime * alpha_prime /
         ((1.0 + 3.0 * alpha_prime) * err_sample + 3.0 * eps_prime);
}

RunResult run_agnostic(AgnosticVariant variant, const Instance& instance,
                       const AgnosticConfig& config, Rng& rng) {
  config.validate(variant);
  const int k = instance.k;
  const int d = instance.concept_class.vc_dim();
  const int t = config.rounds(variant, k);
  const double alpha_p = config.alpha_prime(variant);
  const double eps_p = config.eps_prime(variant);
  const std::int64_t learn_size = config.learn_sample_size(variant, k, d);
  const std::int64_t test_size = config.test_sample_size(variant, k);
  const bool capped_update =
      variant == AgnosticVariant::NR1 || variant == AgnosticVariant::NR2;

  // Weights grow by at most (1 + alpha') per round; refuse schedules whose
  // worst case leaves double range (the paper-faithful divisors at small
  // alpha do; use a round cap there).
  if (static_cast<double>(t) * std::log1p(alpha_p) > 600.0) {
    throw std::invalid_argument(
        "run_agnostic: round schedule can overflow the weight range; set a round cap");
  }

  std::vector<double> weights(static_cast<std::size_t>(k), 1.0);
  RunResult result;
  result.rounds.reserve(static_cast<std::size_t>(t));
  std::vector<Classifier> round_classifiers;
  round_classifiers.reserve(static_cast<std::size_t>(t));

  for (int r = 0; r < t; ++r) {
    double phi = 0.0;
    for (double w : weights) phi += w;
    MixtureDistribution mixture;
    mixture.players = &instance.distributions;
    mixture.selection_probs.reserve(weights.size());
    for (double w : weights) mixture.selection_probs.push_back(w / phi);

    const SampleSet learn =
        mixture_sample(mixture, learn_size, rng, result.ledger, r);
    const std::size_t hyp = erm(instance.concept_class, learn);
    const Classifier f = instance.concept_class.classifier(hyp);
    const double err_sample = empirical_error(f, learn);

    RoundRecord record;
    record.hypothesis = static_cast<int>(hyp);
    record.erm_sample_error = err_sample;
    record.learn_samples = learn_size;
    record.test_samples_per_player = test_size;
    record.steps.reserve(static_cast<std::size_t>(k));
    record.player_errors.reserve(static_cast<std::size_t>(k));

    for (int i = 0; i < k; ++i) {
      const DiscreteDistribution& dist = instance.distributions[static_cast<std::size_t>(i)];
      std::int64_t wrong = 0;
      for (std::int64_t j = 0; j < test_size; ++j) {
        const LabeledExample e = dist.sample(rng);
        wrong += f.evaluate(e.point) != e.label;
      }
      result.ledger.charge(i, r, SamplePurpose::Test, test_size);
      const double err_test = static_cast<double>(wrong) / static_cast<double>(test_size);
      const double s = capped_update
                           ? smooth_step_capped(err_test, err_sample, alpha_p, eps_p)
                           : smooth_step_avg(err_test, err_sample, alpha_p, eps_p);
      const double step_bound = capped_update ? alpha_p : alpha_p / 3.0;
      if (!(s >= 0.0) || s > step_bound * (1.0 + 1e-12)) {
        throw std::logic_error("run_agnostic: smooth step left its admissible range");
      }
      record.steps.push_back(s);
      record.player_errors.push_back(exact_error(f, dist));
      weights[static_cast<std::size_t>(i)] *= 1.0 + s;
    }

    result.rounds.push_back(std::move(record));
    round_classifiers.push_back(f);
  }

  result.classifier = capped_update
                          ? Classifier::majority(std::move(round_classifiers))
                          : Classifier::uniform_average(std::move(round_classifiers));
  result.final_weights = std::move(weights);
  return result;
}

}  // namespace collabpac
