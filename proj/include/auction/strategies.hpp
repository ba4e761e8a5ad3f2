#pragma once

#include "auction/core.hpp"
#include "auction/demand.hpp"
#include "auction/rational.hpp"
#include "auction/trace.hpp"

#include <optional>
#include <string>
#include <vector>

namespace auction {

enum class StrategyKind { xos_update, subadditive_no_overbid, subadditive_aggressive, potential_procedure, scripted, hold };

std::string to_string(StrategyKind kind);
StrategyKind parse_strategy_kind(const std::string& name);

struct Strategy {
  StrategyKind kind = StrategyKind::xos_update;
  // scripted: rows by activation count, cycled.
  std::vector<BidRow> script;
  // potential_procedure: demand set chosen at each activation, cycled; must be a demand set.
  std::vector<ItemSet> demand_script;
};

struct UpdateReport {
  BidRow row;
  ItemSet demand;
  Ratio alpha;
  std::optional<bool> strong;
  std::optional<bool> weak;
  std::optional<bool> grand;
  Value declared_utility;       // u_i^D after the update
  Value best_utility;           // U* against the opposing bids
  std::optional<Value> approx_ratio;  // realized under-approximation ratio (subadditive rules)
};

UpdateReport xos_update(const Instance& instance, const BidProfile& bids, const TieBreak& tie, std::size_t i,
                        const AllocationOptions& options = {});
// Bids the supporting clause on a caller-chosen demand set.
UpdateReport xos_update_on(const Instance& instance, const BidProfile& bids, const TieBreak& tie, std::size_t i,
                           const ItemSet& chosen, const AllocationOptions& options = {});
UpdateReport subadd_noover_update(const Instance& instance, const BidProfile& bids, const TieBreak& tie,
                                  std::size_t i, const AllocationOptions& options = {});
UpdateReport subadd_aggressive_update(const Instance& instance, const BidProfile& bids, const TieBreak& tie,
                                      std::size_t i, const AllocationOptions& options = {});

// activation is the 1-based count of bidder i's activations so far, including this one.
UpdateReport apply_strategy(const Strategy& strategy, std::size_t activation, const Instance& instance,
                            const BidProfile& bids, const TieBreak& tie, std::size_t i,
                            const AllocationOptions& options = {});

// u_i^D(new_row, b_{-i}) / U*(b_{-i}); unbounded when U* = 0.
Ratio measure_aggressiveness(const Instance& instance, const BidProfile& old_bids, const BidRow& new_row,
                             const TieBreak& tie, std::size_t i, const AllocationOptions& options = {});

enum class OverbidMode { strong, weak, grand };

struct OverbidCheck {
  bool holds = true;
  std::optional<ItemSet> witness;
};

// weak mode checks only `won`; strong mode needs m <= 16.
OverbidCheck check_no_overbidding(const Valuation& v, const BidRow& row, OverbidMode mode,
                                  const std::optional<ItemSet>& won = std::nullopt);

struct SafetyReport {
  bool holds = true;       // every profile is beta-safe for the requested beta
  bool feasible = true;    // some finite beta works
  Value beta_min;          // max(1, sup u^D / u) when feasible
  Value sup_ratio;         // sup u^D / u over profiles with u > 0 (0/0 counts as 1)
  std::optional<std::size_t> worst_t;
  std::optional<std::size_t> worst_bidder;
};

SafetyReport check_safety(const Trace& trace, const Value& beta);

}  // namespace auction
