#pragma once

#include "auction/core.hpp"
#include "auction/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace auction {

enum class ScheduleKind { round_robin, uniform_random, scripted };

struct StepRecord {
  std::size_t t = 0;       // 1-based time of the profile this step produces
  std::size_t bidder = 0;  // 0-based
  bool lazy = false;       // kept the old row because it already was a best response
  BidRow row_before;
  BidRow row_after;
  Outcome outcome;         // allocate(b^t)
  std::optional<Ratio> alpha;  // measured aggressiveness; absent on lazy steps
  std::optional<bool> strong;  // no-overbidding flags of row_after
  std::optional<bool> weak;
  std::optional<bool> grand;
  std::vector<Value> running_max;  // y_j = max over t' <= t, i of b^{t'}_{ij}
};

struct Trace {
  std::shared_ptr<const Instance> instance;
  TieBreak tie;
  AllocationOptions allocation;
  ScheduleKind schedule = ScheduleKind::round_robin;
  bool lazy_mode = false;
  BidProfile initial;
  Outcome initial_outcome;
  std::vector<StepRecord> steps;
  std::vector<BidProfile> profiles;  // b^0 .. b^T

  std::size_t length() const { return steps.size(); }
  const BidProfile& profile(std::size_t t) const { return profiles.at(t); }
  const Outcome& outcome(std::size_t t) const { return t == 0 ? initial_outcome : steps.at(t - 1).outcome; }
  // Running maxima y_j after step t (t = 0 gives the initial bids).
  std::vector<Value> running_max(std::size_t t) const;
  // Last activation time of every bidder within steps 1..t (nullopt if never activated).
  std::vector<std::optional<std::size_t>> last_activation(std::size_t t) const;
};

}  // namespace auction
