#include "collabpac/instances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "collabpac/rng.hpp"

namespace collabpac {

namespace {

constexpr std::size_t kMaxClassSize = std::size_t{1} << 16;

// All 2^d labelings of points 1..d with point 0 pinned to label 1.
ConceptClass full_cube_class(int d) {
  if (d < 1) throw std::invalid_argument("instance generator: d must be >= 1");
  if (d > 16) throw std::invalid_argument("instance generator: d must be <= 16");
  const std::uint32_t domain = static_cast<std::uint32_t>(d) + 1;
  std::vector<std::vector<Label>> hypotheses;
  hypotheses.reserve(std::size_t{1} << d);
  for (std::uint32_t code = 0; code < (std::uint32_t{1} << d); ++code) {
    std::vector<Label> table(domain, 0);
    table[0] = 1;
    for (int j = 0; j < d; ++j) {
      table[static_cast<std::size_t>(j) + 1] = (code >> j) & 1u;
    }
    hypotheses.push_back(std::move(table));
  }
  return ConceptClass(domain, std::move(hypotheses), d);
}

void check_eps_inst(double eps_inst) {
  if (!(eps_inst > 0.0) || eps_inst > 0.5) {
    throw std::invalid_argument("instance generator: eps_inst must lie in (0, 0.5]");
  }
}

}  // namespace

Instance make_realizable_instance(int k, int d, std::uint64_t seed, double eps_inst) {
  if (k < 1) throw std::invalid_argument("make_realizable_instance: k must be >= 1");
  check_eps_inst(eps_inst);
  ConceptClass cls = full_cube_class(d);
  Rng rng(seed);
  const int target = static_cast<int>(rng.next_below(cls.size()));
  const auto& target_labels = cls.labels(static_cast<std::size_t>(target));

  std::vector<DiscreteDistribution> dists;
  dists.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    // random nonempty subset of the special points, equal mass each
    const int subset_size = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(d)));
    std::vector<Point> special(static_cast<std::size_t>(d));
    std::iota(special.begin(), special.end(), Point{1});
    for (int j = 0; j < subset_size; ++j) {
      const auto pick = j + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(d - j)));
      std::swap(special[static_cast<std::size_t>(j)], special[static_cast<std::size_t>(pick)]);
    }
    std::vector<DiscreteDistribution::Atom> atoms;
    atoms.push_back({0, 1, 1.0 - 2.0 * eps_inst});
    std::vector<Point> chosen(special.begin(), special.begin() + subset_size);
    std::sort(chosen.begin(), chosen.end());
    for (Point p : chosen) {
      atoms.push_back({p, target_labels[p], 2.0 * eps_inst / subset_size});
    }
    dists.emplace_back(cls.domain_size(), std::move(atoms));
  }
  return Instance{k, std::move(dists), std::move(cls), target, 0.0};
}

Instance make_hard_instance(int k, double eps_inst, std::uint64_t seed) {
  if (k < 1 || k > 16) throw std::invalid_argument("make_hard_instance: k must lie in [1, 16]");
  check_eps_inst(eps_inst);
  ConceptClass cls = full_cube_class(k);
  Rng rng(seed);
  const int target = static_cast<int>(rng.next_below(cls.size()));
  const auto& target_labels = cls.labels(static_cast<std::size_t>(target));

  std::vector<DiscreteDistribution> dists;
  dists.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const Point private_point = static_cast<Point>(i) + 1;
    std::vector<DiscreteDistribution::Atom> atoms;
    atoms.push_back({0, 1, 1.0 - 2.0 * eps_inst});
    atoms.push_back({private_point, target_labels[private_point], 2.0 * eps_inst});
    dists.emplace_back(cls.domain_size(), std::move(atoms));
  }
  return Instance{k, std::move(dists), std::move(cls), target, 0.0};
}

Instance make_noisy_instance(int k, int d, double eta, std::uint64_t seed,
                             double eps_inst) {
  if (!(eta >= 0.0) || eta >= 0.5) {
    throw std::invalid_argument("make_noisy_instance: eta must lie in [0, 0.5)");
  }
  Instance base = make_realizable_instance(k, d, seed, eps_inst);
  if (eta == 0.0) return base;

  std::vector<DiscreteDistribution> noisy;
  noisy.reserve(base.distributions.size());
  for (const DiscreteDistribution& dist : base.distributions) {
    std::vector<DiscreteDistribution::Atom> atoms;
    atoms.reserve(2 * dist.atoms().size());
    for (const auto& a : dist.atoms()) {
      atoms.push_back({a.point, a.label, a.mass * (1.0 - eta)});
      atoms.push_back({a.point, static_cast<Label>(1 - a.label), a.mass * eta});
    }
    noisy.emplace_back(dist.domain_size(), std::move(atoms));
  }
  Instance instance{base.k, std::move(noisy), std::move(base.concept_class),
                    base.target, 0.0};
  instance.opt = compute_opt(instance);
  return instance;
}

double compute_opt(const Instance& instance) {
  if (instance.concept_class.size() > kMaxClassSize) {
    throw std::invalid_argument("compute_opt: class larger than 2^16");
  }
  double best = 2.0;
  for (std::size_t h = 0; h < instance.concept_class.size(); ++h) {
    const Classifier f = instance.concept_class.classifier(h);
    double worst = 0.0;
    for (const DiscreteDistribution& dist : instance.distributions) {
      worst = std::max(worst, exact_error(f, dist));
    }
    best = std::min(best, worst);
  }
  return best;
}

void validate_instance(const Instance& instance) {
  if (instance.k < 1 || static_cast<std::size_t>(instance.k) != instance.distributions.size()) {
    throw std::invalid_argument("instance: k does not match distribution count");
  }
  for (const DiscreteDistribution& dist : instance.distributions) {
    if (dist.domain_size() != instance.concept_class.domain_size()) {
      throw std::invalid_argument("instance: distribution and class domains differ");
    }
  }
  const double opt = compute_opt(instance);
  if (std::abs(opt - instance.opt) > 1e-12) {
    throw std::invalid_argument("instance: recorded opt " + std::to_string(instance.opt) +
                                " differs from brute force " + std::to_string(opt));
  }
  if (instance.target) {
    const Classifier f =
        instance.concept_class.classifier(static_cast<std::size_t>(*instance.target));
    double worst = 0.0;
    for (const DiscreteDistribution& dist : instance.distributions) {
      worst = std::max(worst, exact_error(f, dist));
    }
    if (std::abs(worst - instance.opt) > 1e-12) {
      throw std::invalid_argument("instance: target does not attain opt");
    }
  }
}

std::string instance_to_json(const Instance& instance) {
  nlohmann::json j;
  j["format"] = "collabpac-instance";
  j["version"] = 1;
  j["k"] = instance.k;
  j["domain_size"] = instance.concept_class.domain_size();
  j["vc_dim"] = instance.concept_class.vc_dim();
  nlohmann::json dists = nlohmann::json::array();
  for (const DiscreteDistribution& dist : instance.distributions) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : dist.atoms()) {
      atoms.push_back({a.point, a.label, a.mass});
    }
    dists.push_back(std::move(atoms));
  }
  j["distributions"] = std::move(dists);
  nlohmann::json hyps = nlohmann::json::array();
  for (std::size_t h = 0; h < instance.concept_class.size(); ++h) {
    hyps.push_back(instance.concept_class.labels(h));
  }
  j["hypotheses"] = std::move(hyps);
  if (instance.target) {
    j["target"] = *instance.target;
  } else {
    j["target"] = nullptr;
  }
  j["opt"] = instance.opt;
  return j.dump(2);
}

Instance instance_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != "collabpac-instance") {
    throw std::invalid_argument("instance_from_json: not a collabpac instance file");
  }
  const int k = j.at("k").get<int>();
  const auto domain = j.at("domain_size").get<std::uint32_t>();
  const int vc_dim = j.at("vc_dim").get<int>();

  std::vector<std::vector<Label>> hypotheses;
  for (const auto& h : j.at("hypotheses")) {
    hypotheses.push_back(h.get<std::vector<Label>>());
  }
  ConceptClass cls(domain, std::move(hypotheses), vc_dim);

  std::vector<DiscreteDistribution> dists;
  for (const auto& d : j.at("distributions")) {
    std::vector<DiscreteDistribution::Atom> atoms;
    for (const auto& a : d) {
      atoms.push_back({a.at(0).get<Point>(), a.at(1).get<Label>(), a.at(2).get<double>()});
    }
    dists.emplace_back(domain, std::move(atoms));
  }

  std::optional<int> target;
  if (!j.at("target").is_null()) target = j.at("target").get<int>();

  Instance instance{k, std::move(dists), std::move(cls), target,
                    j.at("opt").get<double>()};
  validate_instance(instance);
  return instance;
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << instance_to_json(instance) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return instance_from_json(text);
}

}  // namespace collabpac
