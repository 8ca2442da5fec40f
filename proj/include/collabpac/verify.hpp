#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "collabpac/core.hpp"

namespace collabpac {

struct PropertyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// err(f, mixture) == sum_i (w_i/Phi) err(f, D_i) within 1e-12, over random
// (weights, distributions, classifier) triples.
PropertyResult check_mixture_identity(int cases, std::uint64_t seed);

// Whenever at least 0.6t of t classifiers have exact error <= eps' on a
// random discrete distribution, the majority has exact error <= 6 eps'.
PropertyResult check_majority_bound(int cases, std::uint64_t seed);

// err(UniformAverage(L), D) equals the mean of the member errors within 1e-12.
PropertyResult check_average_identity(int cases, std::uint64_t seed);

// With a planted classifier of exact error 2 eps' on a player, Test includes
// that player with frequency at most delta'/k + 3 sigma over seeded repeats.
PropertyResult check_test_frequency(int repetitions, std::uint64_t seed);

// FastTest's mistake frequency is at most 0.01 + 3 sigma for planted exact
// errors 2 eps' (wrong inclusion) and eps'/4 (wrong exclusion).
PropertyResult check_fasttest_frequency(int repetitions, std::uint64_t seed);

std::vector<PropertyResult> run_property_suites(std::uint64_t seed);

}  // namespace collabpac
