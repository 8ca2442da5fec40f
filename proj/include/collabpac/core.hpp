#pragma once

#include <cstdint>
#include <vector>

#include "collabpac/rng.hpp"

namespace collabpac {

// Points are indices into a finite domain of known size.
using Point = std::uint32_t;
using Label = std::uint8_t;  // 0 or 1

struct LabeledExample {
  Point point;
  Label label;
};

// Finite probability mass over (point, label) pairs. A point may carry both
// labels (label noise); (point, label) pairs must be distinct and masses must
// sum to 1 within kMassTolerance. Immutable after construction.
class DiscreteDistribution {
 public:
  struct Atom {
    Point point;
    Label label;
    double mass;
  };

  static constexpr double kMassTolerance = 1e-12;

  DiscreteDistribution(std::uint32_t domain_size, std::vector<Atom> atoms);

  std::uint32_t domain_size() const { return domain_size_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  // One draw by inverse CDF over the atom list (atom order is fixed, so the
  // mapping from uniform variate to atom is reproducible).
  LabeledExample sample(Rng& rng) const;

 private:
  std::uint32_t domain_size_ = 0;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

// Ordered multiset of labeled examples plus where they came from.
struct SampleSet {
  static constexpr int kMixture = -1;

  std::vector<LabeledExample> examples;
  int provenance = kMixture;  // player index, or kMixture
};

// A hypothesis (label table over the domain), a majority vote over a list of
// deterministic classifiers, or a uniform-average randomized combiner that
// picks one member uniformly at random per query.
class Classifier {
 public:
  enum class Kind { Single, Majority, UniformAverage };

  Classifier() = default;  // empty; usable only as a placeholder

  static Classifier single(int hypothesis_id, std::vector<Label> labels);
  static Classifier majority(std::vector<Classifier> members);
  static Classifier uniform_average(std::vector<Classifier> members);

  Kind kind() const { return kind_; }
  std::uint32_t domain_size() const { return domain_size_; }
  bool deterministic() const { return kind_ != Kind::UniformAverage; }
  int hypothesis_id() const { return hypothesis_id_; }
  const std::vector<Classifier>& members() const { return members_; }

  // Deterministic label. Majority uses strict majority of member labels;
  // an even split yields label 0. Throws for UniformAverage.
  Label evaluate(Point p) const;

  // Probability of label 1. Equals evaluate(p) for deterministic kinds; for
  // UniformAverage it is the fraction of members voting 1.
  double prob_one(Point p) const;

 private:
  Kind kind_ = Kind::Single;
  std::uint32_t domain_size_ = 0;
  int hypothesis_id_ = -1;
  std::vector<Label> labels_;        // Single
  std::vector<Classifier> members_;  // Majority / UniformAverage
};

// Pr[f(x) != y] under the distribution, computed exactly by enumerating
// atoms. For UniformAverage this equals the mean of the member errors.
double exact_error(const Classifier& classifier, const DiscreteDistribution& dist);

// (# mislabeled examples) / |sample| for a deterministic classifier.
// Throws on an empty sample or a UniformAverage classifier.
double empirical_error(const Classifier& classifier, const SampleSet& sample);

}  // namespace collabpac
