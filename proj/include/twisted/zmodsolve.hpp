#pragma once

#include <optional>
#include <vector>

namespace twisted {

/// Solves A x = b (mod M) over Z_M by streaming gcd-pivot elimination with
/// Howell-style annihilator rows, so solvability over the ring (M composite,
/// zero divisors and all) is decided correctly. Entries are taken mod M.
/// Returns a particular solution (free variables 0) or nullopt.
std::optional<std::vector<long long>> solve_mod(const std::vector<std::vector<long long>>& rows,
                                                const std::vector<long long>& rhs, long long M);

}  // namespace twisted
