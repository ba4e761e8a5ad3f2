#pragma once

#include "auction/item_set.hpp"
#include "auction/rational.hpp"
#include "auction/valuation.hpp"

#include <optional>
#include <vector>

namespace auction {

// Bidders and items are 0-based in code and 1-based in files and reports.
class Instance {
 public:
  Instance(std::size_t m, std::vector<Valuation> valuations);

  std::size_t n() const { return valuations_.size(); }
  std::size_t m() const { return m_; }
  const Valuation& valuation(std::size_t i) const { return valuations_.at(i); }
  const std::vector<Valuation>& valuations() const { return valuations_; }

 private:
  std::size_t m_;
  std::vector<Valuation> valuations_;
};

// order[j] lists bidders for item j, most preferred first.
class TieBreak {
 public:
  TieBreak() = default;
  static TieBreak ascending(std::size_t n, std::size_t m);
  explicit TieBreak(std::vector<std::vector<std::size_t>> order);

  std::size_t n() const { return rank_.empty() ? 0 : rank_[0].size(); }
  std::size_t m() const { return order_.size(); }
  const std::vector<std::vector<std::size_t>>& order() const { return order_; }
  // Lower rank wins ties.
  std::size_t rank(std::size_t item, std::size_t bidder) const { return rank_[item][bidder]; }
  bool operator==(const TieBreak& o) const { return order_ == o.order_; }

 private:
  std::vector<std::vector<std::size_t>> order_;
  std::vector<std::vector<std::size_t>> rank_;
};

using BidRow = std::vector<Value>;

struct BidProfile {
  std::vector<BidRow> rows;

  static BidProfile zeros(std::size_t n, std::size_t m);
  std::size_t n() const { return rows.size(); }
  std::size_t m() const { return rows.empty() ? 0 : rows[0].size(); }
  bool operator==(const BidProfile&) const = default;
};

struct AllocationOptions {
  // When off, an item on which every bid is zero stays unsold.
  bool allocate_zero_bids = true;
};

struct Outcome {
  std::vector<std::optional<std::size_t>> winner;
  std::vector<Value> price;
  std::vector<ItemSet> allocation;
  std::vector<Value> utility;
  std::vector<Value> declared_utility;
  Value sw;
  Value dw;

  bool operator==(const Outcome&) const = default;
};

void validate_profile(const BidProfile& bids, std::size_t n, std::size_t m);

Outcome allocate(const Instance& instance, const BidProfile& bids, const TieBreak& tie,
                 const AllocationOptions& options = {});

Value declared_welfare(const BidProfile& bids);
Value social_welfare(const Instance& instance, const Outcome& outcome);
Value declared_utility(const Instance& instance, const BidProfile& bids, const TieBreak& tie, std::size_t i,
                       const AllocationOptions& options = {});
Value utility(const Instance& instance, const BidProfile& bids, const TieBreak& tie, std::size_t i,
              const AllocationOptions& options = {});

// max_{k != i} b[k][j] for every item j: the prices bidder i faces.
std::vector<Value> opposing_maxima(const BidProfile& bids, std::size_t i);

}  // namespace auction
