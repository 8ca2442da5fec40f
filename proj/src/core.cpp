#include "collabpac/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace collabpac {

DiscreteDistribution::DiscreteDistribution(std::uint32_t domain_size,
                                           std::vector<Atom> atoms)
    : domain_size_(domain_size), atoms_(std::move(atoms)) {
  if (atoms_.empty()) {
    throw std::invalid_argument("DiscreteDistribution: no atoms");
  }
  double total = 0.0;
  std::set<std::pair<Point, Label>> seen;
  for (const Atom& a : atoms_) {
    if (a.point >= domain_size_) {
      throw std::out_of_range("DiscreteDistribution: atom point " +
                              std::to_string(a.point) + " outside domain of size " +
                              std::to_string(domain_size_));
    }
    if (a.label > 1) {
      throw std::invalid_argument("DiscreteDistribution: label must be 0 or 1");
    }
    if (a.mass < 0.0 || !std::isfinite(a.mass)) {
      throw std::invalid_argument("DiscreteDistribution: atom mass must be >= 0");
    }
    if (!seen.insert({a.point, a.label}).second) {
      throw std::invalid_argument("DiscreteDistribution: duplicate (point,label) atom");
    }
    total += a.mass;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw std::invalid_argument("DiscreteDistribution: masses sum to " +
                                std::to_string(total) + ", expected 1");
  }
  cumulative_.reserve(atoms_.size());
  double running = 0.0;
  for (const Atom& a : atoms_) {
    running += a.mass;
    cumulative_.push_back(running);
  }
  cumulative_.back() = 1.0;  // guard against accumulated rounding
}

LabeledExample DiscreteDistribution::sample(Rng& rng) const {
  const double u = rng.next_unit();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  const Atom& a = atoms_[static_cast<std::size_t>(it - cumulative_.begin())];
  return {a.point, a.label};
}

Classifier Classifier::single(int hypothesis_id, std::vector<Label> labels) {
  if (labels.empty()) {
    throw std::invalid_argument("Classifier::single: empty label table");
  }
  for (Label l : labels) {
    if (l > 1) throw std::invalid_argument("Classifier::single: label must be 0 or 1");
  }
  Classifier c;
  c.kind_ = Kind::Single;
  c.domain_size_ = static_cast<std::uint32_t>(labels.size());
  c.hypothesis_id_ = hypothesis_id;
  c.labels_ = std::move(labels);
  return c;
}

namespace {

std::uint32_t common_domain(const std::vector<Classifier>& members, const char* what) {
  if (members.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty member list");
  }
  const std::uint32_t n = members.front().domain_size();
  for (const Classifier& m : members) {
    if (!m.deterministic()) {
      throw std::invalid_argument(std::string(what) +
                                  ": members must be deterministic classifiers");
    }
    if (m.domain_size() != n) {
      throw std::invalid_argument(std::string(what) + ": members disagree on domain size");
    }
  }
  return n;
}

}  // namespace

Classifier Classifier::majority(std::vector<Classifier> members) {
  Classifier c;
  c.domain_size_ = common_domain(members, "Classifier::majority");
  c.kind_ = Kind::Majority;
  c.members_ = std::move(members);
  return c;
}

Classifier Classifier::uniform_average(std::vector<Classifier> members) {
  Classifier c;
  c.domain_size_ = common_domain(members, "Classifier::uniform_average");
  c.kind_ = Kind::UniformAverage;
  c.members_ = std::move(members);
  return c;
}

Label Classifier::evaluate(Point p) const {
  if (p >= domain_size_) {
    throw std::out_of_range("Classifier::evaluate: point " + std::to_string(p) +
                            " outside domain of size " + std::to_string(domain_size_));
  }
  switch (kind_) {
    case Kind::Single:
      return labels_[p];
    case Kind::Majority: {
      std::size_t ones = 0;
      for (const Classifier& m : members_) ones += m.evaluate(p);
      // strict majority; an even split votes 0
      return 2 * ones > members_.size() ? 1 : 0;
    }
    case Kind::UniformAverage:
      throw std::invalid_argument(
          "Classifier::evaluate: UniformAverage has no deterministic label");
  }
  throw std::logic_error("Classifier::evaluate: bad kind");
}

double Classifier::prob_one(Point p) const {
  if (kind_ != Kind::UniformAverage) return static_cast<double>(evaluate(p));
  if (p >= domain_size_) {
    throw std::out_of_range("Classifier::prob_one: point " + std::to_string(p) +
                            " outside domain of size " + std::to_string(domain_size_));
  }
  std::size_t ones = 0;
  for (const Classifier& m : members_) ones += m.evaluate(p);
  return static_cast<double>(ones) / static_cast<double>(members_.size());
}

double exact_error(const Classifier& classifier, const DiscreteDistribution& dist) {
  if (classifier.domain_size() < dist.domain_size()) {
    throw std::invalid_argument("exact_error: classifier domain smaller than distribution domain");
  }
  double err = 0.0;
  for (const auto& a : dist.atoms()) {
    const double p1 = classifier.prob_one(a.point);
    err += a.mass * (a.label == 1 ? 1.0 - p1 : p1);
  }
  return err;
}

double empirical_error(const Classifier& classifier, const SampleSet& sample) {
  if (sample.examples.empty()) {
    throw std::invalid_argument("empirical_error: empty sample");
  }
  if (!classifier.deterministic()) {
    throw std::invalid_argument("empirical_error: unsupported on UniformAverage classifiers");
  }
  std::int64_t wrong = 0;
  for (const LabeledExample& e : sample.examples) {
    wrong += classifier.evaluate(e.point) != e.label;
  }
  return static_cast<double>(wrong) / static_cast<double>(sample.examples.size());
}

}  // namespace collabpac
