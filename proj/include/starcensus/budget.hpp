#pragma once

#include <cstdint>
#include <string_view>

namespace starcensus {

/// Default cap on the elementary operations an exact computation may spend.
inline constexpr std::uint64_t kDefaultBudget = 1'000'000'000;

/// Largest dense grid (points of G^d) any operation will allocate.
inline constexpr std::size_t kMaxGridPoints = std::size_t{1} << 26;

/// Throws BudgetExceeded when ops > budget. ops is a double so that callers
/// can pass estimates like |E|^{k+1} without overflow.
void require_budget(double ops, std::uint64_t budget, std::string_view what);

}  // namespace starcensus
