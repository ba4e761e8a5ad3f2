#include "auction/core.hpp"

#include <doctest.h>

#include <random>

using namespace auction;

namespace {

Value q(const char* s) { return parse_rational(s); }

const Value kEps = q("1/100");

Instance tightness() {
  return Instance(3, {Valuation::unit_demand({1, 0, 0}), Valuation::unit_demand({1 + kEps, 1 + 2 * kEps, 1 + 3 * kEps}),
                      Valuation::unit_demand({0, 0, 1})});
}

BidProfile rows(std::vector<BidRow> r) { return BidProfile{std::move(r)}; }

Value random_value(std::mt19937_64& rng, int den = 6) {
  std::uniform_int_distribution<int> pick(0, 3 * den);
  Value v(pick(rng), den);
  v.canonicalize();
  return v;
}

}  // namespace

TEST_CASE("all-zero bids go to bidder 1 at price 0") {
  Instance inst(3, {Valuation::additive({1, 1, 1}), Valuation::additive({2, 2, 2}), Valuation::additive({3, 3, 3})});
  Outcome o = allocate(inst, BidProfile::zeros(3, 3), TieBreak::ascending(3, 3));
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(o.winner[j] == std::optional<std::size_t>(0));
    CHECK(o.price[j] == 0);
  }
  CHECK(o.allocation[0] == full_set(3));
  CHECK(o.dw == 0);
}

TEST_CASE("zero-bid items stay unsold when allocate_zero_bids is off") {
  Instance inst(2, {Valuation::additive({1, 1}), Valuation::additive({1, 1})});
  Outcome o = allocate(inst, rows({{0, 0}, {0, 1}}), TieBreak::ascending(2, 2), {false});
  CHECK_FALSE(o.winner[0].has_value());
  CHECK(o.winner[1] == std::optional<std::size_t>(1));
  CHECK(o.sw == 1);
}

TEST_CASE("tightness start: player 2 wins item 1 at price 0") {
  Instance inst = tightness();
  BidProfile b = rows({{0, 0, 0}, {1 + kEps, 0, 0}, {0, 0, 0}});
  Outcome o = allocate(inst, b, TieBreak::ascending(3, 3));
  CHECK(o.winner[0] == std::optional<std::size_t>(1));
  CHECK(o.price[0] == 0);
  CHECK(o.utility[1] == 1 + kEps);
}

TEST_CASE("two bidders, two items, second price") {
  Instance inst(2, {Valuation::additive({4, 4}), Valuation::additive({4, 6})});
  BidProfile b = rows({{3, 1}, {2, 5}});
  TieBreak tie = TieBreak::ascending(2, 2);
  Outcome o = allocate(inst, b, tie);
  CHECK(o.winner[0] == std::optional<std::size_t>(0));
  CHECK(o.price[0] == 2);
  CHECK(o.winner[1] == std::optional<std::size_t>(1));
  CHECK(o.price[1] == 1);
  CHECK(declared_welfare(b) == 8);
  CHECK(o.dw == 8);
  CHECK(declared_utility(inst, b, tie, 0) == 1);
  CHECK(utility(inst, b, tie, 0) == 2);
}

TEST_CASE("declared welfare") {
  CHECK(declared_welfare(BidProfile::zeros(3, 3)) == 0);
  CHECK(declared_welfare(rows({{0, 0, 0}, {0, 0, 1 + 3 * kEps}, {0, 0, 0}})) == 1 + 3 * kEps);
}

TEST_CASE("social welfare on the tightness instance") {
  Instance inst = tightness();
  TieBreak tie = TieBreak::ascending(3, 3);
  // Bidder 1 wins all three items; a unit-demand bidder values them at max(1, 0, 0).
  Outcome zero = allocate(inst, BidProfile::zeros(3, 3), tie);
  CHECK(zero.sw == inst.valuation(0).value(full_set(3)));
  CHECK(zero.sw == 1);

  BidProfile b3 = rows({{0, 0, 0}, {0, 0, 1 + 3 * kEps}, {0, 0, 0}});
  Outcome o = allocate(inst, b3, tie, {false});
  CHECK(o.sw == 1 + 3 * kEps);
  CHECK(social_welfare(inst, o) == 1 + 3 * kEps);
  CHECK(declared_utility(inst, b3, tie, 1, {false}) == 1 + 3 * kEps);
  CHECK(utility(inst, b3, tie, 1, {false}) == 1 + 3 * kEps);
}

TEST_CASE("empty allocation has zero welfare") {
  Instance inst(2, {Valuation::additive({1, 2}), Valuation::unit_demand({3, 1})});
  Outcome o = allocate(inst, BidProfile::zeros(2, 2), TieBreak::ascending(2, 2), {false});
  CHECK(o.sw == 0);
  CHECK(social_welfare(inst, o) == 0);
}

TEST_CASE("losing bidder has zero utility") {
  Instance inst(2, {Valuation::additive({4, 4}), Valuation::additive({4, 6})});
  BidProfile b = rows({{3, 3}, {2, 2}});
  TieBreak tie = TieBreak::ascending(2, 2);
  CHECK(declared_utility(inst, b, tie, 1) == 0);
  CHECK(utility(inst, b, tie, 1) == 0);
}

TEST_CASE("overbidding can make utility negative") {
  const Value C = 10;
  Instance inst(1, {Valuation::additive({1}), Valuation::additive({C})});
  TieBreak tie = TieBreak::ascending(2, 1);
  CHECK(utility(inst, rows({{C + kEps}, {kEps}}), tie, 0) == 1 - kEps);
  CHECK(utility(inst, rows({{C + kEps}, {C}}), tie, 0) == 1 - C);
  CHECK(declared_utility(inst, rows({{C + kEps}, {C}}), tie, 0) == kEps);
}

TEST_CASE("residual utility") {
  Valuation p2 = Valuation::unit_demand({1 + kEps, 1 + 2 * kEps, 1 + 3 * kEps});
  CHECK(residual_utility(p2, {5, 5, 5}, empty_set(3)) == 0);
  CHECK(residual_utility(p2, {0, 0, 0}, make_set(3, {2})) == 1 + 3 * kEps);
  Valuation u = Valuation::unit_demand({1, 1});
  CHECK(residual_utility(u, {1 + kEps, 0}, make_set(2, {0})) == -kEps);
}

TEST_CASE("tie-break order decides equal bids") {
  Instance inst(2, {Valuation::additive({1, 1}), Valuation::additive({1, 1})});
  TieBreak tie({{1, 0}, {0, 1}});
  Outcome o = allocate(inst, rows({{1, 1}, {1, 1}}), tie);
  CHECK(o.winner[0] == std::optional<std::size_t>(1));
  CHECK(o.winner[1] == std::optional<std::size_t>(0));
  CHECK(o.price[0] == 1);
  CHECK_THROWS_AS(TieBreak({{0, 0}, {0, 1}}), std::invalid_argument);
}

TEST_CASE("single bidder pays nothing") {
  Instance inst(2, {Valuation::additive({2, 3})});
  Outcome o = allocate(inst, rows({{1, 1}}), TieBreak::ascending(1, 2));
  CHECK(o.price[0] == 0);
  CHECK(o.price[1] == 0);
  CHECK(o.utility[0] == 5);
}

TEST_CASE("malformed profiles are rejected") {
  Instance inst(2, {Valuation::additive({1, 1}), Valuation::additive({1, 1})});
  TieBreak tie = TieBreak::ascending(2, 2);
  CHECK_THROWS_AS(allocate(inst, rows({{1, 1}}), tie), std::invalid_argument);
  CHECK_THROWS_AS(allocate(inst, rows({{1, 1}, {1}}), tie), std::invalid_argument);
  CHECK_THROWS_AS(allocate(inst, rows({{1, 1}, {q("-1/2"), 0}}), tie), std::invalid_argument);
  CHECK_THROWS_AS(allocate(inst, rows({{1, 1}, {1, 1}}), TieBreak::ascending(2, 3)), std::invalid_argument);
}

TEST_CASE("allocation invariants on random profiles") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + rng() % 4, m = 1 + rng() % 5;
    std::vector<Valuation> vals;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Value> w;
      for (std::size_t j = 0; j < m; ++j) w.push_back(random_value(rng));
      vals.push_back(trial % 2 ? Valuation::additive(w) : Valuation::unit_demand(w));
    }
    Instance inst(m, vals);
    BidProfile b = BidProfile::zeros(n, m);
    for (auto& row : b.rows)
      for (auto& x : row) x = random_value(rng, 2);
    std::vector<std::vector<std::size_t>> order(m);
    for (auto& o : order) {
      for (std::size_t i = 0; i < n; ++i) o.push_back(i);
      std::shuffle(o.begin(), o.end(), rng);
    }
    TieBreak tie(order);
    Outcome o = allocate(inst, b, tie);
    CHECK(o == allocate(inst, b, tie));

    Value dw = 0;
    for (std::size_t j = 0; j < m; ++j) {
      REQUIRE(o.winner[j].has_value());
      std::size_t w = *o.winner[j];
      std::size_t owners = 0;
      for (std::size_t i = 0; i < n; ++i) owners += o.allocation[i].test(j);
      CHECK(owners == 1);
      CHECK(o.allocation[w].test(j));
      Value top = 0, second = 0;
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(b.rows[w][j] >= b.rows[i][j]);
        if (i != w && b.rows[i][j] == b.rows[w][j]) CHECK(tie.rank(j, w) < tie.rank(j, i));
        top = std::max(top, b.rows[i][j]);
        if (i != w) second = std::max(second, b.rows[i][j]);
      }
      CHECK(o.price[j] == second);
      CHECK(o.price[j] <= b.rows[w][j]);
      dw += top;
    }
    CHECK(o.dw == dw);
    CHECK(declared_welfare(b) == dw);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(o.declared_utility[i] >= 0);
      CHECK(o.declared_utility[i] == declared_utility(inst, b, tie, i));
      CHECK(o.utility[i] == utility(inst, b, tie, i));
      CHECK(residual_utility(inst.valuation(i), opposing_maxima(b, i), o.allocation[i]) == o.utility[i]);
    }
  }
}
