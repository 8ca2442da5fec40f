#include "collabpac/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "collabpac/collab.hpp"
#include "collabpac/ledger.hpp"

namespace collabpac {

namespace {

std::string format(const char* fmt, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

// Random distribution over a small domain; points may carry both labels.
DiscreteDistribution random_distribution(std::uint32_t domain, Rng& rng) {
  std::vector<DiscreteDistribution::Atom> atoms;
  double total = 0.0;
  for (Point p = 0; p < domain; ++p) {
    for (Label l = 0; l <= 1; ++l) {
      const double u = rng.next_unit();
      if (u > 0.4) {
        atoms.push_back({p, l, u});
        total += u;
      }
    }
  }
  if (atoms.empty()) {
    atoms.push_back({0, 1, 1.0});
    total = 1.0;
  }
  for (auto& a : atoms) a.mass /= total;
  return DiscreteDistribution(domain, std::move(atoms));
}

// Random distribution with one deterministic label per point.
DiscreteDistribution random_labeled_distribution(std::uint32_t domain,
                                                 std::vector<Label>& truth, Rng& rng) {
  truth.assign(domain, 0);
  std::vector<DiscreteDistribution::Atom> atoms;
  double total = 0.0;
  for (Point p = 0; p < domain; ++p) {
    truth[p] = static_cast<Label>(rng.next_below(2));
    const double u = 0.05 + rng.next_unit();
    atoms.push_back({p, truth[p], u});
    total += u;
  }
  for (auto& a : atoms) a.mass /= total;
  return DiscreteDistribution(domain, std::move(atoms));
}

Classifier random_single(std::uint32_t domain, Rng& rng) {
  std::vector<Label> labels(domain);
  for (auto& l : labels) l = static_cast<Label>(rng.next_below(2));
  return Classifier::single(-1, std::move(labels));
}

// Planted single-player setup: classifier wrong exactly on a point of the
// given mass, so its exact error is forced.
struct Planted {
  DiscreteDistribution dist;
  Classifier classifier;
};

Planted plant_error(double error) {
  std::vector<DiscreteDistribution::Atom> atoms{{0, 1, 1.0 - error}, {1, 1, error}};
  Planted p{DiscreteDistribution(2, std::move(atoms)),
            Classifier::single(-1, {1, 0})};
  return p;
}

}  // namespace

PropertyResult check_mixture_identity(int cases, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const int k = 1 + static_cast<int>(rng.next_below(6));
    const std::uint32_t domain = 2 + static_cast<std::uint32_t>(rng.next_below(7));
    std::vector<DiscreteDistribution> players;
    players.reserve(static_cast<std::size_t>(k));
    std::vector<double> weights;
    double phi = 0.0;
    for (int i = 0; i < k; ++i) {
      players.push_back(random_distribution(domain, rng));
      weights.push_back(0.25 + 4.0 * rng.next_unit());
      phi += weights.back();
    }
    MixtureDistribution mixture;
    mixture.players = &players;
    for (double w : weights) mixture.selection_probs.push_back(w / phi);

    Classifier f = random_single(domain, rng);
    if (rng.next_below(2) == 1) {
      std::vector<Classifier> members;
      for (int j = 0; j < 3; ++j) members.push_back(random_single(domain, rng));
      f = Classifier::majority(std::move(members));
    }

    const double flat = exact_error(f, flatten(mixture));
    double weighted = 0.0;
    for (int i = 0; i < k; ++i) {
      weighted += mixture.selection_probs[static_cast<std::size_t>(i)] *
                  exact_error(f, players[static_cast<std::size_t>(i)]);
    }
    worst = std::max(worst, std::abs(flat - weighted));
  }
  return {"mixture-linearity", worst <= 1e-12,
          format("max |err(mixture) - weighted avg| = %.3g (tolerance %.0e)", worst, 1e-12)};
}

PropertyResult check_majority_bound(int cases, std::uint64_t seed) {
  Rng rng(seed);
  int violations = 0;
  double worst_ratio = 0.0;
  for (int c = 0; c < cases; ++c) {
    const std::uint32_t domain = 2 + static_cast<std::uint32_t>(rng.next_below(8));
    std::vector<Label> truth;
    const DiscreteDistribution dist = random_labeled_distribution(domain, truth, rng);
    const int t = 5 + static_cast<int>(rng.next_below(11));
    const double eps_prime = 0.02 + 0.13 * rng.next_unit();
    const int min_good = static_cast<int>(std::ceil(0.6 * t));
    const int good = min_good + static_cast<int>(rng.next_below(
                                    static_cast<std::uint64_t>(t - min_good + 1)));

    std::vector<Classifier> members;
    members.reserve(static_cast<std::size_t>(t));
    for (int j = 0; j < good; ++j) {
      // flip a random set of points whose total mass stays within eps'
      std::vector<Label> labels = truth;
      std::vector<std::size_t> order(dist.atoms().size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      for (std::size_t a = 0; a + 1 < order.size(); ++a) {
        std::swap(order[a], order[a + rng.next_below(order.size() - a)]);
      }
      double budget = eps_prime;
      for (std::size_t idx : order) {
        const auto& atom = dist.atoms()[idx];
        if (atom.mass <= budget && rng.next_below(2) == 1) {
          labels[atom.point] = static_cast<Label>(1 - labels[atom.point]);
          budget -= atom.mass;
        }
      }
      members.push_back(Classifier::single(-1, std::move(labels)));
    }
    for (int j = good; j < t; ++j) {
      std::vector<Label> labels = truth;
      for (auto& l : labels) {
        if (rng.next_below(2) == 1) l = static_cast<Label>(1 - l);
      }
      members.push_back(Classifier::single(-1, std::move(labels)));
    }
    for (std::size_t a = 0; a + 1 < members.size(); ++a) {
      std::swap(members[a], members[a + rng.next_below(members.size() - a)]);
    }

    const double maj_err = exact_error(Classifier::majority(std::move(members)), dist);
    worst_ratio = std::max(worst_ratio, maj_err / eps_prime);
    if (maj_err > 6.0 * eps_prime + 1e-12) ++violations;
  }
  return {"majority-bound", violations == 0,
          format("violations = %.0f, worst err/eps' = %.3f (bound 6)",
                 static_cast<double>(violations), worst_ratio)};
}

PropertyResult check_average_identity(int cases, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const std::uint32_t domain = 2 + static_cast<std::uint32_t>(rng.next_below(7));
    const DiscreteDistribution dist = random_distribution(domain, rng);
    const int n = 1 + static_cast<int>(rng.next_below(8));
    std::vector<Classifier> members;
    double mean = 0.0;
    for (int j = 0; j < n; ++j) {
      members.push_back(random_single(domain, rng));
      mean += exact_error(members.back(), dist);
    }
    mean /= n;
    const double avg_err = exact_error(Classifier::uniform_average(std::move(members)), dist);
    worst = std::max(worst, std::abs(avg_err - mean));
  }
  return {"average-combiner", worst <= 1e-12,
          format("max |err(avg) - mean member err| = %.3g (tolerance %.0e)", worst, 1e-12)};
}

PropertyResult check_test_frequency(int repetitions, std::uint64_t seed) {
  const double eps_prime = 0.1;
  const double delta_prime = 0.01;
  const int k = 4;
  const Planted planted = plant_error(2.0 * eps_prime);
  std::vector<DiscreteDistribution> players(static_cast<std::size_t>(k), planted.dist);

  Rng rng(seed);
  int included = 0;
  for (int r = 0; r < repetitions; ++r) {
    SampleLedger ledger;
    const auto passed = test_procedure(planted.classifier, players, eps_prime,
                                       delta_prime, 32.0, rng, ledger, 0);
    included += passed[0];
  }
  const double p = delta_prime / k;
  const double sigma = std::sqrt(p * (1.0 - p) / repetitions);
  const double freq = static_cast<double>(included) / repetitions;
  return {"test-frequency", freq <= p + 3.0 * sigma,
          format("wrong-inclusion frequency %.5f (allowed %.5f)", freq, p + 3.0 * sigma)};
}

PropertyResult check_fasttest_frequency(int repetitions, std::uint64_t seed) {
  const double eps_prime = 0.1;
  const double allowed =
      0.01 + 3.0 * std::sqrt(0.01 * 0.99 / repetitions);
  Rng rng(seed);

  const auto mistake_rate = [&](double planted_error, bool mistake_is_inclusion) {
    const Planted planted = plant_error(planted_error);
    std::vector<DiscreteDistribution> players(2, planted.dist);
    int mistakes = 0;
    for (int r = 0; r < repetitions; ++r) {
      SampleLedger ledger;
      const auto passed = fast_test_procedure(planted.classifier, players, eps_prime,
                                              148.0, rng, ledger, 0);
      mistakes += mistake_is_inclusion ? passed[0] : 1 - passed[0];
    }
    return static_cast<double>(mistakes) / repetitions;
  };

  const double high = mistake_rate(2.0 * eps_prime, /*mistake_is_inclusion=*/true);
  const double low = mistake_rate(eps_prime / 4.0, /*mistake_is_inclusion=*/false);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "mistake frequencies %.5f / %.5f (allowed %.5f)", high, low, allowed);
  return {"fasttest-frequency", high <= allowed && low <= allowed, buf};
}

std::vector<PropertyResult> run_property_suites(std::uint64_t seed) {
  return {
      check_mixture_identity(1000, seed),
      check_majority_bound(1000, seed + 1),
      check_average_identity(1000, seed + 2),
      check_test_frequency(10000, seed + 3),
      check_fasttest_frequency(10000, seed + 4),
  };
}

}  // namespace collabpac
