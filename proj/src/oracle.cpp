#include "collabpac/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace collabpac {

ConceptClass::ConceptClass(std::uint32_t domain_size,
                           std::vector<std::vector<Label>> hypotheses, int vc_dim)
    : domain_size_(domain_size), hypotheses_(std::move(hypotheses)), vc_dim_(vc_dim) {
  if (hypotheses_.empty()) {
    throw std::invalid_argument("ConceptClass: empty hypothesis list");
  }
  if (vc_dim_ < 1) {
    throw std::invalid_argument("ConceptClass: vc_dim must be >= 1");
  }
  for (const auto& h : hypotheses_) {
    if (h.size() != domain_size_) {
      throw std::invalid_argument("ConceptClass: hypothesis table size != domain size");
    }
    for (Label l : h) {
      if (l > 1) throw std::invalid_argument("ConceptClass: label must be 0 or 1");
    }
  }
  // pairwise distinct, checked via sorted order
  std::vector<std::size_t> order(hypotheses_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return hypotheses_[a] < hypotheses_[b]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (hypotheses_[order[i - 1]] == hypotheses_[order[i]]) {
      throw std::invalid_argument("ConceptClass: duplicate hypotheses");
    }
  }
}

Classifier ConceptClass::classifier(std::size_t index) const {
  return Classifier::single(static_cast<int>(index), hypotheses_.at(index));
}

std::size_t erm(const ConceptClass& concept_class, const SampleSet& sample) {
  if (sample.examples.empty()) return 0;

  // Aggregate the sample into per-point label counts so each hypothesis is
  // scored in O(|domain|) instead of O(|sample|).
  const std::uint32_t n = concept_class.domain_size();
  std::vector<std::array<std::int64_t, 2>> counts(n, {0, 0});
  for (const LabeledExample& e : sample.examples) {
    if (e.point >= n) {
      throw std::out_of_range("erm: sample point " + std::to_string(e.point) +
                              " outside class domain of size " + std::to_string(n));
    }
    counts[e.point][e.label] += 1;
  }

  std::size_t best = 0;
  std::int64_t best_mistakes = std::numeric_limits<std::int64_t>::max();
  for (std::size_t h = 0; h < concept_class.size(); ++h) {
    const auto& table = concept_class.labels(h);
    std::int64_t mistakes = 0;
    for (std::uint32_t p = 0; p < n; ++p) {
      mistakes += counts[p][1 - table[p]];
    }
    if (mistakes < best_mistakes) {
      best_mistakes = mistakes;
      best = h;
    }
  }
  return best;
}

std::int64_t fuzzy_ceil(double value) {
  const double c = std::ceil(value - std::abs(value) * 1e-12);
  if (!(c < 9.0e18)) {
    throw std::invalid_argument("sample size overflows a 64-bit count");
  }
  return static_cast<std::int64_t>(c);
}

namespace {

std::int64_t ceil_to_count(double value) {
  return std::max<std::int64_t>(1, fuzzy_ceil(value));
}

void check_unit_interval(double v, const char* name) {
  if (!(v > 0.0) || v > 1.0) {
    throw std::invalid_argument(std::string(name) + " must lie in (0, 1]");
  }
}

}  // namespace

std::int64_t realizable_sample_size(double eps, double delta, int d,
                                    const SampleSizeConfig& cfg) {
  check_unit_interval(eps, "eps");
  check_unit_interval(delta, "delta");
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (!(cfg.c_real > 0.0)) throw std::invalid_argument("C_real must be > 0");
  const double m =
      (cfg.c_real / eps) * (d * std::log(1.0 / eps) + std::log(1.0 / delta));
  return ceil_to_count(m);
}

std::int64_t agnostic_sample_size(double eps, double delta, double alpha, int d,
                                  const SampleSizeConfig& cfg) {
  check_unit_interval(eps, "eps");
  check_unit_interval(delta, "delta");
  check_unit_interval(alpha, "alpha");
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (!(cfg.c_agn > 0.0)) throw std::invalid_argument("C_agn must be > 0");
  const double m = (cfg.c_agn / (eps * alpha)) *
                   (d * std::log(1.0 / eps) + std::log(1.0 / delta));
  return ceil_to_count(m);
}

}  // namespace collabpac
