#pragma once

#include "auction/item_set.hpp"
#include "auction/rational.hpp"
#include "auction/valuation.hpp"

#include <vector>

namespace auction {

enum class DemandMode { any_max, inclusion_minimal, all };

struct DemandQuery {
  std::vector<Value> prices;
  DemandMode mode = DemandMode::any_max;
};

struct DemandResult {
  std::vector<ItemSet> sets;  // sorted by mask_less
  Value utility;              // the maximum residual utility
};

// any_max and inclusion_minimal both return the single smallest-bitmask maximizer,
// which is always inclusion-minimal. Exhaustive for m <= 20 unless the valuation
// carries a structured oracle.
DemandResult demand(const Valuation& v, const DemandQuery& query);
std::vector<ItemSet> demand_sets(const Valuation& v, const DemandQuery& query);
ItemSet demand_set(const Valuation& v, const std::vector<Value>& prices);

// U* = max_S v(S) - p(S).
Value best_utility(const Valuation& v, const std::vector<Value>& prices);

constexpr std::size_t kDemandLimit = 20;

}  // namespace auction
