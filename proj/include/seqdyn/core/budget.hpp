#pragma once

#include <cstddef>
#include <cstdint>

namespace seqdyn {

// Hard resource limits shared by every computation. Exceeding one raises
// BudgetError rather than truncating silently.
struct Budget {
  std::size_t max_family = 4096;
  std::int64_t max_power = 1'000'000;
  std::size_t max_cuts = 10'000'000;
  std::size_t max_pieces = 1'000'000;
  std::size_t max_samples = 10'000'000;
  std::int64_t max_ledger_steps = 10'000;

  friend bool operator==(const Budget&, const Budget&) = default;
};

}  // namespace seqdyn
