#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "collabpac/core.hpp"
#include "collabpac/rng.hpp"

using namespace collabpac;

namespace {

Classifier table(std::vector<Label> labels) {
  return Classifier::single(-1, std::move(labels));
}

DiscreteDistribution two_point_dist() {
  return DiscreteDistribution(2, {{0, 1, 0.75}, {1, 1, 0.25}});
}

// per-atom enumeration, written independently of exact_error
double enumerate_error(const Classifier& f, const DiscreteDistribution& d) {
  double total = 0.0;
  for (const auto& a : d.atoms()) {
    if (f.deterministic()) {
      if (f.evaluate(a.point) != a.label) total += a.mass;
    } else {
      std::size_t wrong = 0;
      for (const auto& m : f.members()) wrong += m.evaluate(a.point) != a.label;
      total += a.mass * static_cast<double>(wrong) / static_cast<double>(f.members().size());
    }
  }
  return total;
}

DiscreteDistribution random_dist(std::uint32_t domain, Rng& rng) {
  std::vector<DiscreteDistribution::Atom> atoms;
  double total = 0.0;
  for (Point p = 0; p < domain; ++p) {
    for (Label l = 0; l <= 1; ++l) {
      if (rng.next_unit() < 0.7) {
        const double u = 0.01 + rng.next_unit();
        atoms.push_back({p, l, u});
        total += u;
      }
    }
  }
  if (atoms.empty()) {
    atoms.push_back({0, 0, 1.0});
    total = 1.0;
  }
  for (auto& a : atoms) a.mass /= total;
  return DiscreteDistribution(domain, std::move(atoms));
}

Classifier random_table(std::uint32_t domain, Rng& rng) {
  std::vector<Label> labels(domain);
  for (auto& l : labels) l = static_cast<Label>(rng.next_below(2));
  return Classifier::single(-1, std::move(labels));
}

}  // namespace

TEST_CASE("distribution invariants are enforced") {
  CHECK_THROWS_AS(DiscreteDistribution(2, {{0, 1, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution(2, {{0, 1, 0.5}, {0, 1, 0.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution(2, {{0, 1, 1.5}, {1, 1, -0.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution(1, {{1, 1, 1.0}}), std::out_of_range);
  // a point may carry both labels
  CHECK_NOTHROW(DiscreteDistribution(1, {{0, 0, 0.3}, {0, 1, 0.7}}));
}

TEST_CASE("majority vote uses strict majority with ties voting 0") {
  const auto f1 = table({1, 1});
  const auto f2 = table({1, 0});
  const auto f3 = table({0, 0});

  const auto maj3 = Classifier::majority({f1, f2, f3});
  CHECK(maj3.evaluate(0) == 1);  // votes 1,1,0
  CHECK(maj3.evaluate(1) == 0);  // votes 1,0,0

  const auto maj2 = Classifier::majority({f1, f3});
  CHECK(maj2.evaluate(0) == 0);  // votes 1,0 -> tie -> 0

  // pure function: repeated evaluation is stable
  CHECK(maj2.evaluate(0) == maj2.evaluate(0));
}

TEST_CASE("uniform average reports the member vote fraction") {
  const auto avg = Classifier::uniform_average({table({1, 1}), table({0, 1})});
  CHECK(avg.prob_one(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(avg.prob_one(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(avg.evaluate(0), std::invalid_argument);
}

TEST_CASE("classifier rejects out-of-domain points and bad construction") {
  const auto f = table({1, 0});
  CHECK_THROWS_AS(f.evaluate(2), std::out_of_range);
  CHECK_THROWS_AS(Classifier::majority({}), std::invalid_argument);
  CHECK_THROWS_AS(Classifier::majority({table({1}), table({1, 0})}),
                  std::invalid_argument);
  // combiners take deterministic members only
  const auto avg = Classifier::uniform_average({table({1, 0})});
  CHECK_THROWS_AS(Classifier::majority({avg}), std::invalid_argument);
}

TEST_CASE("exact_error on hand-built distributions") {
  const auto dist = two_point_dist();
  CHECK(exact_error(table({1, 1}), dist) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(exact_error(table({1, 0}), dist) == doctest::Approx(0.25).epsilon(1e-15));

  // average of a perfect and a 0.4-error member is 0.2
  const auto perfect = table({1, 1});
  std::vector<DiscreteDistribution::Atom> atoms{{0, 1, 0.6}, {1, 1, 0.4}};
  const DiscreteDistribution d(2, std::move(atoms));
  const auto wrong_on_1 = table({1, 0});
  REQUIRE(exact_error(perfect, d) == doctest::Approx(0.0));
  REQUIRE(exact_error(wrong_on_1, d) == doctest::Approx(0.4));
  const auto avg = Classifier::uniform_average({perfect, wrong_on_1});
  CHECK(exact_error(avg, d) == doctest::Approx(0.2).epsilon(1e-13));
  CHECK(exact_error(avg, d) == doctest::Approx(enumerate_error(avg, d)).epsilon(1e-13));
}

TEST_CASE("exact_error matches independent enumeration on random cases") {
  Rng rng(2024);
  for (int c = 0; c < 300; ++c) {
    const std::uint32_t domain = 2 + static_cast<std::uint32_t>(rng.next_below(7));
    const auto dist = random_dist(domain, rng);
    Classifier f = random_table(domain, rng);
    if (rng.next_below(3) == 0) {
      f = Classifier::majority(
          {random_table(domain, rng), random_table(domain, rng), random_table(domain, rng)});
    } else if (rng.next_below(3) == 1) {
      f = Classifier::uniform_average({random_table(domain, rng), random_table(domain, rng)});
    }
    const double err = exact_error(f, dist);
    CHECK(err >= 0.0);
    CHECK(err <= 1.0);
    CHECK(std::abs(err - enumerate_error(f, dist)) <= 1e-12);
  }
}

TEST_CASE("uniform-average error equals the mean of member errors") {
  Rng rng(77);
  for (int c = 0; c < 300; ++c) {
    const std::uint32_t domain = 2 + static_cast<std::uint32_t>(rng.next_below(6));
    const auto dist = random_dist(domain, rng);
    const int n = 1 + static_cast<int>(rng.next_below(7));
    std::vector<Classifier> members;
    double mean = 0.0;
    for (int j = 0; j < n; ++j) {
      members.push_back(random_table(domain, rng));
      mean += exact_error(members.back(), dist);
    }
    mean /= n;
    CHECK(std::abs(exact_error(Classifier::uniform_average(members), dist) - mean) <= 1e-12);
  }
}

TEST_CASE("empirical_error counts mismatches") {
  const auto f = table({1, 0});

  SampleSet quarter;
  quarter.examples = {{0, 1}, {0, 1}, {0, 1}, {0, 0}};  // one mismatch
  CHECK(empirical_error(f, quarter) == doctest::Approx(0.25).epsilon(1e-15));

  SampleSet consistent;
  consistent.examples = {{0, 1}, {1, 0}, {0, 1}};
  CHECK(empirical_error(f, consistent) == doctest::Approx(0.0));

  // 3098 examples with 233 mislabeled
  SampleSet big;
  big.examples.reserve(3098);
  for (int i = 0; i < 3098; ++i) {
    big.examples.push_back({0, static_cast<Label>(i < 233 ? 0 : 1)});
  }
  std::int64_t wrong = 0;  // counting oracle
  for (const auto& e : big.examples) wrong += f.evaluate(e.point) != e.label;
  REQUIRE(wrong == 233);
  CHECK(empirical_error(f, big) == 233.0 / 3098.0);
}

TEST_CASE("empirical_error error paths") {
  const auto f = table({1, 0});
  CHECK_THROWS_AS(empirical_error(f, SampleSet{}), std::invalid_argument);
  const auto avg = Classifier::uniform_average({f});
  SampleSet s;
  s.examples = {{0, 1}};
  CHECK_THROWS_AS(empirical_error(avg, s), std::invalid_argument);
}

TEST_CASE("empirical error concentrates around the exact error") {
  // Hoeffding sanity: |emp - exact| <= 4 sqrt(ln(20)/2n) in >= 90 of 100 draws
  const DiscreteDistribution dist(2, {{0, 1, 0.7}, {1, 0, 0.1}, {1, 1, 0.2}});
  const auto f = table({1, 0});
  const double exact = exact_error(f, dist);
  REQUIRE(exact == doctest::Approx(0.2));

  const int n = 400;
  const double bound = 4.0 * std::sqrt(std::log(20.0) / (2.0 * n));
  int within = 0;
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    SampleSet s;
    s.examples.reserve(n);
    for (int i = 0; i < n; ++i) s.examples.push_back(dist.sample(rng));
    if (std::abs(empirical_error(f, s) - exact) <= bound) ++within;
  }
  CHECK(within >= 90);
}

TEST_CASE("sampling is deterministic given the seed") {
  const auto dist = two_point_dist();
  Rng a(123), b(123);
  for (int i = 0; i < 50; ++i) {
    const auto ea = dist.sample(a);
    const auto eb = dist.sample(b);
    CHECK(ea.point == eb.point);
    CHECK(ea.label == eb.label);
  }
}
