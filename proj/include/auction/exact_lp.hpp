#pragma once

#include "auction/rational.hpp"

#include <vector>

namespace auction {

struct LpSolution {
  std::vector<Value> x;
  Value objective;
};

// maximize c.x subject to A x <= b, x >= 0, where b >= 0 (the origin is feasible).
// Exact dictionary simplex with Bland's rule. Throws std::domain_error if unbounded.
LpSolution maximize_from_origin(const std::vector<std::vector<Value>>& a, const std::vector<Value>& b,
                                const std::vector<Value>& c);

}  // namespace auction
