#include "auction/experiments.hpp"
#include "auction/gf2.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace auction;
using namespace auction::gf2;

namespace {

// Independent oracle: every subspace of F_2^k (zero dropped) found by closure testing
// over all subsets of nonzero vectors.
std::vector<std::uint32_t> all_subspace_masks(std::size_t k) {
  const std::size_t m = (std::size_t{1} << k) - 1;
  std::vector<std::uint32_t> out{0};
  for (std::uint32_t set = 1; set < (1U << m); ++set) {
    bool closed = true;
    for (std::size_t x = 1; x <= m && closed; ++x) {
      if (!(set >> (x - 1) & 1)) continue;
      for (std::size_t y = x + 1; y <= m && closed; ++y)
        if (set >> (y - 1) & 1) closed = set >> ((x ^ y) - 1) & 1;
    }
    if (closed) out.push_back(set);
  }
  return out;
}

std::size_t dimension(std::uint32_t set) {
  std::size_t size = __builtin_popcount(set) + 1, d = 0;
  while ((std::size_t{1} << d) < size) ++d;
  return d;
}

Value q(const char* s) { return parse_rational(s); }

}  // namespace

TEST_CASE("cover sets") {
  auto s = cover_sets(2);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == make_set(3, {0, 2}));
  CHECK(s[1] == make_set(3, {1, 2}));
  CHECK(s[2] == make_set(3, {0, 1}));
  CHECK(cover_sets(1) == std::vector<ItemSet>{make_set(1, {0})});
  for (std::size_t k : {2, 3, 4, 5}) {
    std::size_t m = (std::size_t{1} << k) - 1;
    for (const auto& c : cover_sets(k)) CHECK(c.count() == (m + 1) / 2);
  }
}

TEST_CASE("v1 examples") {
  CHECK(v1_value(2, empty_set(3)).value == 0);
  CHECK(v1_value(2, full_set(3)).value == 2);
  CHECK(v1_value(2, make_set(3, {0, 1})).value == 1);
  CHECK(v1_value(2, make_set(3, {0, 1})).exact);
}

TEST_CASE("v1 equals k minus the largest avoiding subspace") {
  // T is covered by {S_i : i in C} iff span(C)^perp misses T, so the minimum cover
  // size is k - max dim of a subspace meeting T only in zero.
  for (std::size_t k : {2, 3, 4}) {
    const std::size_t m = (std::size_t{1} << k) - 1;
    auto subspaces = all_subspace_masks(k);
    for (std::uint32_t t = 0; t < (1U << m); ++t) {
      std::size_t best = 0;
      for (auto u : subspaces)
        if ((u & t) == 0) best = std::max(best, dimension(u));
      auto v = v1_value(k, from_mask(t, m));
      REQUIRE(v.exact);
      CHECK(v.value == Value(static_cast<unsigned long>(k - best)));
    }
  }
}

TEST_CASE("subspace enumeration") {
  auto d1 = enumerate_subspaces(2, 1);
  REQUIRE(d1.size() == 3);
  CHECK(d1[0].items == make_set(3, {0}));
  CHECK(d1[1].items == make_set(3, {1}));
  CHECK(d1[2].items == make_set(3, {2}));

  for (std::size_t k : {2, 3, 4}) {
    auto oracle = all_subspace_masks(k);
    for (std::size_t d = 1; d <= k; ++d) {
      std::set<std::uint64_t> expected, got;
      for (auto u : oracle)
        if (dimension(u) == d) expected.insert(u);
      for (const auto& s : enumerate_subspaces(k, d)) got.insert(to_mask(s.items));
      CHECK(got == expected);
      CHECK(gaussian_binomial(k, d) == expected.size());
    }
  }

  auto d42 = enumerate_subspaces(4, 2);
  CHECK(d42.size() == 35);
  std::vector<int> per_item(15, 0);
  for (const auto& s : d42)
    for (auto j : members(s.items)) ++per_item[j];
  for (int c : per_item) CHECK(c == 7);
  CHECK(gaussian_binomial(8, 5) == 97155);
  CHECK(gaussian_binomial(8, 5) == 255ULL * 127 * 63 / (7 * 3 * 1));
}

TEST_CASE("enumerated subspaces are closed and symmetric") {
  for (auto [k, d] : {std::pair{4, 2}, {5, 3}, {6, 4}}) {
    auto family = enumerate_subspaces(k, d);
    const std::size_t m = (std::size_t{1} << k) - 1;
    std::vector<std::uint64_t> per_item(m, 0);
    for (const auto& s : family) {
      std::set<std::uint32_t> members_set(s.vectors.begin(), s.vectors.end());
      CHECK(s.vectors.size() == (std::size_t{1} << d) - 1);
      for (auto x : s.vectors) {
        ++per_item[x - 1];
        for (auto y : s.vectors)
          if (x != y) CHECK(members_set.count(x ^ y) == 1);
      }
    }
    for (auto c : per_item) CHECK(c == gaussian_binomial(k - 1, d - 1));
  }
}

TEST_CASE("basis covers") {
  auto d1 = enumerate_subspaces(2, 1);
  CHECK(basis_cover(2, d1[2]) == std::vector<std::size_t>{3});

  for (std::size_t k : {4, 8}) {
    auto hard = build_hard_instance(k);
    const auto& family = *hard.family;
    std::size_t step = k == 8 ? 97 : 1;
    for (std::size_t idx = 0; idx < family.size(); idx += step) {
      auto cover = basis_cover(k, family[idx]);
      CHECK(cover.size() <= k - hard.d);
      ItemSet covered = empty_set(hard.m);
      for (auto i : cover) covered |= hard.covers.at(i - 1);
      CHECK((full_set(hard.m) - family[idx].items).is_subset_of(covered));
    }
  }
}

TEST_CASE("hard instance constants") {
  auto h2 = build_hard_instance(2);
  CHECK(h2.m == 3);
  CHECK(h2.d == 1);
  CHECK(h2.rho == q("8/3"));
  CHECK(h2.family->size() == 3);
  Instance i2 = h2.instance();
  CHECK(i2.valuation(1).value(make_set(3, {0})) == q("8/3"));
  CHECK(i2.valuation(1).value(empty_set(3)) == 0);

  auto h4 = build_hard_instance(4);
  CHECK(h4.rho == q("16/15"));
  CHECK(h4.proof_bound() == q("94/15"));

  // rho = 4k/m with m = 2^k - 1 makes rho 2^d = 4 * 2^k / (2^k - 1) * 2^d / k, which is
  // 1024/255 at k = 8 rather than exactly 4.
  auto h8 = build_hard_instance(8);
  CHECK(h8.d == 5);
  CHECK(h8.rho == Value(4 * 8, 255));
  CHECK(h8.rho_two_to_d() == q("1024/255"));
  CHECK(h8.max_v2() == q("992/255"));
  CHECK(h8.family->size() == 97155);

  CHECK_THROWS(build_hard_instance(3));
  CHECK_THROWS(build_hard_instance(16));
}

TEST_CASE("optimum of the k=2 instance by brute force") {
  auto hard = build_hard_instance(2);
  Instance inst = hard.instance();
  Value best = 0;
  for (std::uint64_t mine = 0; mine < 8; ++mine)
    best = std::max(best, Value(inst.valuation(0).value_mask(mine) + inst.valuation(1).value_mask(7 & ~mine)));
  CHECK(best == q("11/3"));
  CHECK(compute_opt(inst).value == q("11/3"));
}

TEST_CASE("cheap subspace") {
  auto h2 = build_hard_instance(2);
  CHECK(cheap_subspace(h2, {0, 0, 0}) == std::optional<std::size_t>(0));
  auto idx = cheap_subspace(h2, {q("2/3"), q("2/3"), q("2/3")});
  REQUIRE(idx);
  CHECK((*h2.family)[*idx].items.count() == 1);
  CHECK(q("2/3") < h2.rho / 2);

  auto h8 = build_hard_instance(8);
  std::mt19937_64 rng(31);
  for (int s = 0; s < 1000; ++s) {
    std::vector<long> w(h8.m);
    long total = 0;
    for (auto& x : w) total += x = static_cast<long>(rng() % (s % 3 == 0 ? 2 : 100));
    std::vector<Value> b1(h8.m, 0);
    if (total > 0)
      for (std::size_t j = 0; j < h8.m; ++j) {
        b1[j] = Value(8 * w[j], total);
        b1[j].canonicalize();
      }
    auto found = cheap_subspace(h8, b1);
    REQUIRE(found);
    Value sum = 0;
    for (auto j : members((*h8.family)[*found].items)) sum += b1[j];
    CHECK(sum < h8.rho * 32 / 2);
  }
}

TEST_CASE("v2 demand sets") {
  auto h2 = build_hard_instance(2);
  CHECK(v2_demand_set(h2, {10, 10, 10}) == empty_set(3));
  CHECK(v2_demand_set(h2, {0, 10, 10}) == make_set(3, {0}));

  auto h4 = build_hard_instance(4);
  std::mt19937_64 rng(5);
  for (int s = 0; s < 200; ++s) {
    std::vector<Value> prices(h4.m);
    for (auto& p : prices) {
      p = Value(static_cast<long>(rng() % 12), 10);
      p.canonicalize();
    }
    if (!cheap_subspace(h4, prices)) continue;
    ItemSet set = v2_demand_set(h4, prices);
    bool contains = false;
    for (const auto& d : *h4.family) contains = contains || d.items.is_subset_of(set);
    CHECK(contains);
  }
}

TEST_CASE("structured v2 demand matches exhaustive enumeration at k=2") {
  auto h2 = build_hard_instance(2);
  Instance inst = h2.instance();
  std::mt19937_64 rng(8);
  for (int s = 0; s < 1000; ++s) {
    std::vector<Value> prices(3);
    for (auto& p : prices) {
      p = Value(static_cast<long>(rng() % 13), 3);
      p.canonicalize();
    }
    Value best;
    std::optional<ItemSet> first_min;
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
      Value u = residual_utility(inst.valuation(1), prices, from_mask(mask, 3));
      if (mask == 0 || u > best) best = u;
    }
    // smallest-bitmask maximizer with no maximizing strict subset
    for (std::uint64_t mask = 0; mask < 8 && !first_min; ++mask) {
      if (residual_utility(inst.valuation(1), prices, from_mask(mask, 3)) != best) continue;
      bool minimal = true;
      for (std::uint64_t sub = (mask - 1) & mask; mask && sub != mask; sub = (sub - 1) & mask) {
        if (residual_utility(inst.valuation(1), prices, from_mask(sub, 3)) == best) minimal = false;
        if (sub == 0) break;
      }
      if (minimal) first_min = from_mask(mask, 3);
    }
    CHECK(v2_demand_set(h2, prices) == *first_min);
  }
}

TEST_CASE("v2 is monotone and subadditive") {
  auto h2 = build_hard_instance(2);
  Instance i2 = h2.instance();
  CHECK(check_class(i2.valuation(1), ValuationClass::subadditive).holds);
  CHECK(check_class(i2.valuation(1), ValuationClass::monotone).holds);

  for (std::size_t k : {4, 8}) {
    auto hard = build_hard_instance(k);
    std::mt19937_64 rng(k);
    for (int s = 0; s < (k == 4 ? 10000 : 300); ++s) {
      ItemSet a = empty_set(hard.m), b = empty_set(hard.m);
      for (std::size_t j = 0; j < hard.m; ++j) {
        if (rng() % 3 == 0) a.set(j);
        if (rng() % 3 == 0) b.set(j);
      }
      Value va = hard.v2->value(a), vb = hard.v2->value(b), vab = hard.v2->value(a | b);
      CHECK(vab <= va + vb);
      CHECK(vab >= va);
      CHECK(vab >= vb);
    }
  }
}

TEST_CASE("beneficial deviation at k=8") {
  auto hard = build_hard_instance(8);
  Instance inst = hard.instance();
  TieBreak tie = TieBreak::ascending(2, hard.m);
  BidProfile b = BidProfile::zeros(2, hard.m);
  ItemSet target = v2_demand_set(hard, b.rows[0]);
  for (auto j : members(target)) b.rows[1][j] = q("1/1000");
  auto dev = construct_deviation(hard, b, tie);
  CHECK(dev.wins_everything);
  CHECK(dev.weakly_no_overbidding);
  CHECK(dev.gain_lower_bound >= 1);
  CHECK(dev.cover.size() <= 3);
  BidProfile after = b;
  after.rows[0] = dev.row;
  Outcome o = allocate(inst, after, tie);
  CHECK(o.allocation[0] == full_set(hard.m));
}
