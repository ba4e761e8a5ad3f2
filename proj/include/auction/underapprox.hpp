#pragma once

#include "auction/rational.hpp"

#include <cstdint>
#include <vector>

namespace auction {

// Set functions on a ground set D of size d are passed as tables f[mask], mask < 2^d.

// An optimal solution of: maximize sum a_j s.t. a(S) <= f(S) for all S, a >= 0.
// Requires f >= 0. Cutting planes over the 2^d constraints, exact simplex inside.
std::vector<Value> max_additive_support(const std::vector<Value>& f, std::size_t d);

struct Underapprox {
  std::vector<Value> weights;
  Value lp_optimum;  // sum of the unrepaired optimum
  Value ratio;       // sum(weights) / f(D)
  bool repaired = false;
  Value delta;       // blend weight used by the positivity repair (0 if none)
};

// Requires f(S) > 0 for every nonempty S and d <= 16. All returned weights are > 0.
Underapprox additive_underapprox(const std::vector<Value>& f, std::size_t d);

// True iff a(S) <= f(S) for every S; on failure *violated receives the first bad mask.
bool underapprox_feasible(const std::vector<Value>& f, std::size_t d, const std::vector<Value>& a,
                          std::uint64_t* violated = nullptr);

constexpr std::size_t kUnderapproxLimit = 16;

}  // namespace auction
