#include "auction/core.hpp"

#include <stdexcept>
#include <string>

namespace auction {

Instance::Instance(std::size_t m, std::vector<Valuation> valuations) : m_(m), valuations_(std::move(valuations)) {
  if (m_ == 0) throw std::invalid_argument("instance needs at least one item");
  if (valuations_.empty()) throw std::invalid_argument("instance needs at least one bidder");
  for (std::size_t i = 0; i < valuations_.size(); ++i) {
    if (valuations_[i].items() != m_)
      throw std::invalid_argument("valuation of bidder " + std::to_string(i + 1) + " has " +
                                  std::to_string(valuations_[i].items()) + " items, expected " +
                                  std::to_string(m_));
  }
}

TieBreak TieBreak::ascending(std::size_t n, std::size_t m) {
  std::vector<std::size_t> row(n);
  for (std::size_t i = 0; i < n; ++i) row[i] = i;
  return TieBreak(std::vector<std::vector<std::size_t>>(m, row));
}

TieBreak::TieBreak(std::vector<std::vector<std::size_t>> order) : order_(std::move(order)) {
  if (order_.empty()) throw std::invalid_argument("tie-break needs at least one item");
  std::size_t n = order_[0].size();
  rank_.assign(order_.size(), std::vector<std::size_t>(n, n));
  for (std::size_t j = 0; j < order_.size(); ++j) {
    if (order_[j].size() != n) throw std::invalid_argument("tie-break rows differ in length");
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t b = order_[j][r];
      if (b >= n || rank_[j][b] != n)
        throw std::invalid_argument("tie-break for item " + std::to_string(j + 1) + " is not a permutation");
      rank_[j][b] = r;
    }
  }
}

BidProfile BidProfile::zeros(std::size_t n, std::size_t m) {
  return BidProfile{std::vector<BidRow>(n, BidRow(m, Value(0)))};
}

void validate_profile(const BidProfile& bids, std::size_t n, std::size_t m) {
  if (bids.n() != n) throw std::invalid_argument("bid profile has wrong number of bidders");
  for (std::size_t i = 0; i < n; ++i) {
    if (bids.rows[i].size() != m) throw std::invalid_argument("bid row " + std::to_string(i + 1) + " has wrong length");
    for (std::size_t j = 0; j < m; ++j)
      if (sgn(bids.rows[i][j]) < 0)
        throw std::invalid_argument("negative bid for bidder " + std::to_string(i + 1) + " on item " +
                                    std::to_string(j + 1));
  }
}

Outcome allocate(const Instance& instance, const BidProfile& bids, const TieBreak& tie,
                 const AllocationOptions& options) {
  const std::size_t n = instance.n();
  const std::size_t m = instance.m();
  validate_profile(bids, n, m);
  if (tie.n() != n || tie.m() != m) throw std::invalid_argument("tie-break dimensions do not match instance");

  Outcome out;
  out.winner.assign(m, std::nullopt);
  out.price.assign(m, Value(0));
  out.allocation.assign(n, empty_set(m));
  out.utility.assign(n, Value(0));
  out.declared_utility.assign(n, Value(0));
  out.dw = 0;

  for (std::size_t j = 0; j < m; ++j) {
    std::size_t best = tie.order()[j][0];
    for (std::size_t i = 0; i < n; ++i) {
      int c = cmp(bids.rows[i][j], bids.rows[best][j]);
      if (c > 0 || (c == 0 && tie.rank(j, i) < tie.rank(j, best))) best = i;
    }
    const Value& top = bids.rows[best][j];
    out.dw += top;
    if (sgn(top) == 0 && !options.allocate_zero_bids) continue;
    Value second = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (i != best && bids.rows[i][j] > second) second = bids.rows[i][j];
    out.winner[j] = best;
    out.price[j] = second;
    out.allocation[best].set(j);
    out.declared_utility[best] += top - second;
  }

  out.sw = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Value v = instance.valuation(i).value(out.allocation[i]);
    Value paid = 0;
    for (auto j = out.allocation[i].find_first(); j != ItemSet::npos; j = out.allocation[i].find_next(j))
      paid += out.price[j];
    out.utility[i] = v - paid;
    out.sw += v;
  }
  return out;
}

Value declared_welfare(const BidProfile& bids) {
  Value total = 0;
  for (std::size_t j = 0; j < bids.m(); ++j) {
    Value top = 0;
    for (const auto& row : bids.rows)
      if (row[j] > top) top = row[j];
    total += top;
  }
  return total;
}

Value social_welfare(const Instance& instance, const Outcome& outcome) {
  Value total = 0;
  for (std::size_t i = 0; i < instance.n(); ++i) total += instance.valuation(i).value(outcome.allocation.at(i));
  return total;
}

Value declared_utility(const Instance& instance, const BidProfile& bids, const TieBreak& tie, std::size_t i,
                       const AllocationOptions& options) {
  return allocate(instance, bids, tie, options).declared_utility.at(i);
}

Value utility(const Instance& instance, const BidProfile& bids, const TieBreak& tie, std::size_t i,
              const AllocationOptions& options) {
  return allocate(instance, bids, tie, options).utility.at(i);
}

std::vector<Value> opposing_maxima(const BidProfile& bids, std::size_t i) {
  std::vector<Value> p(bids.m(), Value(0));
  for (std::size_t k = 0; k < bids.n(); ++k) {
    if (k == i) continue;
    for (std::size_t j = 0; j < bids.m(); ++j)
      if (bids.rows[k][j] > p[j]) p[j] = bids.rows[k][j];
  }
  return p;
}

}  // namespace auction
