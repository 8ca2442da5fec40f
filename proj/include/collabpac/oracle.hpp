#pragma once

#include <cstdint>
#include <vector>

#include "collabpac/core.hpp"

namespace collabpac {

// Multipliers for the single-task sample-size formulas. The bounds hold for
// "some constant C"; both are exposed so experiments can pin them.
struct SampleSizeConfig {
  double c_real = 1.0;
  double c_agn = 1.0;
};

// Finite enumeration of hypotheses over a shared domain, with the VC
// dimension declared by whoever built the class.
class ConceptClass {
 public:
  ConceptClass(std::uint32_t domain_size, std::vector<std::vector<Label>> hypotheses,
               int vc_dim);

  std::uint32_t domain_size() const { return domain_size_; }
  std::size_t size() const { return hypotheses_.size(); }
  int vc_dim() const { return vc_dim_; }
  const std::vector<Label>& labels(std::size_t index) const { return hypotheses_.at(index); }
  Classifier classifier(std::size_t index) const;

 private:
  std::uint32_t domain_size_ = 0;
  std::vector<std::vector<Label>> hypotheses_;
  int vc_dim_ = 0;
};

// Exact ERM over the finite class: index of a hypothesis with the fewest
// sample mistakes, ties broken by lowest index. An empty sample returns 0.
std::size_t erm(const ConceptClass& concept_class, const SampleSet& sample);

// Ceiling with a relative nudge so closed-form values that are
// mathematically integral are not pushed up by the last float bit
// (148 / (0.6/6) must give 1480, not 1481).
std::int64_t fuzzy_ceil(double value);

// max(1, ceil((C/eps) * (d*ln(1/eps) + ln(1/delta))))
std::int64_t realizable_sample_size(double eps, double delta, int d,
                                    const SampleSizeConfig& cfg = {});

// max(1, ceil((C/(eps*alpha)) * (d*ln(1/eps) + ln(1/delta))))
std::int64_t agnostic_sample_size(double eps, double delta, double alpha, int d,
                                  const SampleSizeConfig& cfg = {});

}  // namespace collabpac
