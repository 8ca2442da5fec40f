#include "collabpac/ledger.hpp"

#include <stdexcept>

namespace collabpac {

void SampleLedger::charge(int player, int round, SamplePurpose purpose,
                          std::int64_t count) {
  if (count < 0) throw std::invalid_argument("SampleLedger::charge: negative count");
  if (count == 0) return;
  cells_[Key{player, round, purpose}] += count;
  total_ += count;
}

std::int64_t SampleLedger::player_total(int player) const {
  std::int64_t sum = 0;
  for (const auto& [key, count] : cells_) {
    if (key.player == player) sum += count;
  }
  return sum;
}

std::int64_t SampleLedger::purpose_total(SamplePurpose purpose) const {
  std::int64_t sum = 0;
  for (const auto& [key, count] : cells_) {
    if (key.purpose == purpose) sum += count;
  }
  return sum;
}

}  // namespace collabpac
