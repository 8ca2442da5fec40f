#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "collabpac/core.hpp"
#include "collabpac/oracle.hpp"

namespace collabpac {

// A k-player problem: one distribution per player, a finite concept class
// over the shared domain, and the exactly computed OPT. When a target
// hypothesis is recorded it attains the max-player error OPT.
struct Instance {
  int k = 0;
  std::vector<DiscreteDistribution> distributions;
  ConceptClass concept_class;
  std::optional<int> target;
  double opt = 0.0;
};

// Domain of d+1 points; the class is every labeling of the d special points
// with point 0 pinned to label 1 (|F| = 2^d, VC dimension d). Each player
// puts mass 1-2*eps_inst on (x_0, 1) and spreads 2*eps_inst over a random
// nonempty subset of special points labeled by a random target. OPT = 0.
Instance make_realizable_instance(int k, int d, std::uint64_t seed,
                                  double eps_inst = 0.25);

// d = k; player i's distribution is {(x_0,1, 1-2*eps_inst), (x_i, f*(x_i),
// 2*eps_inst)}, so driving the max-player error below 2*eps_inst requires
// learning every player's private point. OPT = 0.
Instance make_hard_instance(int k, double eps_inst = 0.25, std::uint64_t seed = 0);

// Realizable instance with every atom (x, y, m) split into (x, y, m*(1-eta))
// and (x, 1-y, m*eta). The target keeps exact error eta on every player and
// remains the minimizer, so OPT = eta.
Instance make_noisy_instance(int k, int d, double eta, std::uint64_t seed,
                             double eps_inst = 0.25);

// Exact brute force: min over hypotheses of the max per-player exact error.
// Rejects classes larger than 2^16.
double compute_opt(const Instance& instance);

// Checks the structural invariants (normalized masses, target attains opt,
// recorded opt matches brute force). Throws on violation.
void validate_instance(const Instance& instance);

// JSON replay format: domain size, per-player atoms, hypothesis tables,
// declared VC dimension, target, opt.
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);
void save_instance(const Instance& instance, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace collabpac
