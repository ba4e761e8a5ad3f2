#pragma once

#include "auction/core.hpp"
#include "auction/strategies.hpp"
#include "auction/trace.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace auction {

struct Schedule {
  ScheduleKind kind = ScheduleKind::round_robin;
  std::uint64_t seed = 0;
  std::vector<std::size_t> order;  // scripted: 0-based bidders, cycled

  static Schedule round_robin() { return {}; }
  static Schedule uniform_random(std::uint64_t seed) { return {ScheduleKind::uniform_random, seed, {}}; }
  static Schedule scripted(std::vector<std::size_t> order) { return {ScheduleKind::scripted, 0, std::move(order)}; }
};

std::string to_string(ScheduleKind kind);

struct RunConfig {
  std::size_t steps = 0;  // T; 0 means 10 n
  bool lazy = false;
  bool stop_on_fixed_point = false;
  std::optional<TieBreak> tie;               // default ascending
  std::vector<Strategy> strategies;          // one per bidder, or one shared by all
  Schedule schedule;
  std::optional<BidProfile> initial;         // default all zero
  std::optional<bool> allocate_zero_bids;    // default: on when eager, off when lazy
};

Trace run(std::shared_ptr<const Instance> instance, const RunConfig& config);

struct PneCheck {
  bool is_pne = true;
  std::optional<std::size_t> deviator;
  std::optional<ItemSet> improving_set;
  Value gain;
};

PneCheck is_pne(const Instance& instance, const BidProfile& bids, const TieBreak& tie,
                const AllocationOptions& options = {});

struct ValidationReport {
  bool clean = true;
  std::optional<std::size_t> first_bad_step;  // 0 means the initial profile
  std::vector<std::string> issues;
};

ValidationReport validate_trace(const Trace& trace);

}  // namespace auction
