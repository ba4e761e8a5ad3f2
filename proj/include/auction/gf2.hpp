#pragma once

#include "auction/core.hpp"
#include "auction/demand.hpp"
#include "auction/item_set.hpp"
#include "auction/rational.hpp"
#include "auction/valuation.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace auction::gf2 {

// Item j (1-based) is the k-bit vector with integer value j; set bit j-1 in an ItemSet.
inline bool dot(std::uint32_t a, std::uint32_t b) { return (__builtin_popcount(a & b) & 1U) != 0; }

struct Subspace {
  std::vector<std::uint32_t> vectors;  // nonzero members, ascending
  std::vector<std::uint32_t> basis;    // reduced row echelon form
  ItemSet items;
};

// S_1..S_m (index i-1 holds S_i).
std::vector<ItemSet> cover_sets(std::size_t k);

// All d-dimensional subspaces (zero excluded), sorted by mask_less on their item sets.
std::vector<Subspace> enumerate_subspaces(std::size_t k, std::size_t d);

// Gaussian binomial [k choose d]_2.
std::uint64_t gaussian_binomial(std::size_t k, std::size_t d);

struct CoverValue {
  Value value;
  bool exact = true;  // false: greedy upper bound
};

// Minimum number of cover sets needed to cover T. Exact when m <= 15.
CoverValue v1_value(std::size_t k, const ItemSet& t);

// Cover-set indices (1-based) covering M \ D' via the dual of an extended basis.
std::vector<std::size_t> basis_cover(std::size_t k, const Subspace& d_prime);

class SetCoverValuation : public StructuredValuation {
 public:
  explicit SetCoverValuation(std::size_t k);
  std::string kind_name() const override { return "set_cover"; }
  std::size_t items() const override { return m_; }
  Value value(const ItemSet& s) const override;
  bool exact() const { return !table_.empty(); }

 private:
  std::size_t k_;
  std::size_t m_;
  std::vector<std::uint8_t> table_;  // exact minimum cover sizes, m <= 15
};

class SubspaceValuation : public StructuredValuation {
 public:
  SubspaceValuation(std::size_t k, std::shared_ptr<const std::vector<Subspace>> family);
  std::string kind_name() const override { return "subspace"; }
  std::size_t items() const override { return m_; }
  Value value(const ItemSet& s) const override;
  std::optional<ItemSet> demand(const std::vector<Value>& prices) const override;

  const Value& rho() const { return rho_; }
  std::size_t d() const { return d_; }
  Value full_value() const;  // rho (2^d - 1)
  Value half_value() const;  // rho (2^d - 1) / 2
  const std::vector<Subspace>& family() const { return *family_; }
  // Index of the first member of the family contained in s.
  std::optional<std::size_t> contained_subspace(const ItemSet& s) const;

 private:
  std::size_t k_, m_, d_;
  Value rho_;
  std::shared_ptr<const std::vector<Subspace>> family_;
};

// Exact per-subspace price sums, using 64-bit integers over a common denominator
// when the prices allow it.
class SubspaceSums {
 public:
  SubspaceSums(const std::vector<Subspace>& family, const std::vector<Value>& prices);
  std::size_t size() const { return count_; }
  Value sum(std::size_t idx) const;
  // Smallest sum and every index attaining it (ascending).
  Value min_sum(std::vector<std::size_t>* argmin = nullptr) const;
  // First index whose sum is strictly below the threshold.
  std::optional<std::size_t> first_below(const Value& threshold) const;

 private:
  std::size_t count_ = 0;
  bool integral_ = false;
  mpz_class scale_;
  std::vector<std::int64_t> int_sums_;
  std::vector<Value> sums_;
};

struct HardInstance {
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t d = 0;
  Value rho;
  std::vector<ItemSet> covers;
  std::shared_ptr<const std::vector<Subspace>> family;
  std::shared_ptr<const SetCoverValuation> v1;
  std::shared_ptr<const SubspaceValuation> v2;

  Instance instance() const;
  Value max_v2() const { return v2->full_value(); }
  Value rho_two_to_d() const;
  Value proof_bound() const { return Value(static_cast<unsigned long>(k - d)) + rho_two_to_d(); }
};

// k must be a power of two with 2 <= k <= 8.
HardInstance build_hard_instance(std::size_t k);

// First D in enumeration order with sum_{j in D} b1_j < rho |D| / 2.
std::optional<std::size_t> cheap_subspace(const HardInstance& hard, const std::vector<Value>& b1);

ItemSet v2_demand_set(const HardInstance& hard, const std::vector<Value>& prices,
                      DemandMode mode = DemandMode::inclusion_minimal);

struct Deviation {
  BidRow row;
  std::size_t d_prime = 0;          // index into the family, a member won by player 2
  std::vector<std::size_t> cover;   // basis cover of M \ D'
  Value bid_sum;                    // sum of the new row
  Value certified_bid_bound;        // v2(D') + 1 + |cover|
  bool weakly_no_overbidding = false;  // bid_sum <= bound <= k = v1(M)
  Value gain_lower_bound;           // d - v2(W)
  bool wins_everything = false;
};

// bids has two rows (player 1, player 2). Throws std::domain_error if player 2's
// won set contains no member of the family.
Deviation construct_deviation(const HardInstance& hard, const BidProfile& bids, const TieBreak& tie);

}  // namespace auction::gf2
