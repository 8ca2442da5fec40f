#pragma once

#include <compare>
#include <cstdint>
#include <map>

namespace collabpac {

enum class SamplePurpose { Learn, Test };

// Exact accounting of every drawn sample by (player, round, purpose).
// Mixture draws are charged to the player whose distribution produced the
// example. The grand total is the quantity the sample-complexity bounds are
// about, so counts are tracked as integers and never estimated.
class SampleLedger {
 public:
  struct Key {
    int player;
    int round;
    SamplePurpose purpose;
    auto operator<=>(const Key&) const = default;
  };

  void charge(int player, int round, SamplePurpose purpose, std::int64_t count);

  std::int64_t total() const { return total_; }
  std::int64_t player_total(int player) const;
  std::int64_t purpose_total(SamplePurpose purpose) const;
  const std::map<Key, std::int64_t>& cells() const { return cells_; }

  bool operator==(const SampleLedger&) const = default;

 private:
  std::map<Key, std::int64_t> cells_;
  std::int64_t total_ = 0;
};

}  // namespace collabpac
