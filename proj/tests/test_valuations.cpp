#include "auction/demand.hpp"
#include "auction/gf2.hpp"
#include "auction/underapprox.hpp"
#include "auction/valuation.hpp"

#include <doctest.h>

#include <random>

using namespace auction;

namespace {

Value q(const char* s) { return parse_rational(s); }

const Value kEps = q("1/100");

Valuation player2_xos() {
  return Valuation::xos(3, {{1 + kEps, 0, 0}, {0, 1 + 2 * kEps, 0}, {0, 0, 1 + 3 * kEps}});
}

Value brute_best(const Valuation& v, const std::vector<Value>& prices, std::vector<ItemSet>* argmax = nullptr) {
  const std::size_t m = v.items();
  Value best = 0;
  bool first = true;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    ItemSet s = from_mask(mask, m);
    Value u = v.value(s);
    for (std::size_t j = 0; j < m; ++j)
      if (s.test(j)) u -= prices[j];
    if (first || u > best) {
      best = u;
      first = false;
      if (argmax) argmax->clear();
    }
    if (argmax && u == best) argmax->push_back(s);
  }
  return best;
}

Value random_price(std::mt19937_64& rng) {
  Value v(static_cast<long>(rng() % 13), 4);
  v.canonicalize();
  return v;
}

std::vector<Valuation> sample_valuations(std::uint64_t seed, std::size_t m) {
  std::vector<Valuation> out;
  GeneratorParams p{m, 3, 8};
  for (auto kind : {GeneratedKind::xos, GeneratedKind::budgeted_additive, GeneratedKind::coverage,
                    GeneratedKind::set_cover_cost, GeneratedKind::unit_demand, GeneratedKind::additive})
    out.push_back(generate(kind, p, seed));
  return out;
}

}  // namespace

TEST_CASE("value examples") {
  CHECK(player2_xos().value(full_set(3)) == 1 + 3 * kEps);
  Valuation budget = Valuation::budgeted_additive({1, 1, 1}, 2);
  CHECK(budget.value(full_set(3)) == 2);
  for (const auto& v : sample_valuations(3, 5)) CHECK(v.value(empty_set(5)) == 0);
  CHECK(Valuation::mph(3, 2, {{{make_set(3, {0, 1}), 5}}}).value(make_set(3, {0})) == 0);
  CHECK(Valuation::mph(3, 2, {{{make_set(3, {0, 1}), 5}}}).value(full_set(3)) == 5);
}

TEST_CASE("constructors reject invalid data") {
  CHECK_THROWS(Valuation::additive({1, q("-1/2")}));
  CHECK_THROWS(Valuation::explicit_table(1, {1, 2}));
  CHECK_THROWS(Valuation::mph(3, 1, {{{make_set(3, {0, 1}), 5}}}));
}

TEST_CASE("demand set examples") {
  CHECK(demand_set(player2_xos(), {0, 0, 0}) == make_set(3, {2}));
  Valuation budget = Valuation::budgeted_additive({1, 1, 1}, 2);
  CHECK(demand_set(budget, {2, 2, 2}) == empty_set(3));
  auto minimal = demand_sets(budget, {{0, 0, 0}, DemandMode::inclusion_minimal});
  REQUIRE(minimal.size() == 1);
  CHECK(minimal.front() == make_set(3, {0, 1}));
  // the minimal maximizers are exactly the three pairs
  std::vector<ItemSet> pairs;
  for (const auto& s : demand_sets(budget, {{0, 0, 0}, DemandMode::all}))
    if (s.count() == 2) pairs.push_back(s);
  CHECK(pairs.size() == 3);
  CHECK(demand(budget, {{0, 0, 0}, DemandMode::inclusion_minimal}).sets.front() == make_set(3, {0, 1}));
}

TEST_CASE("xos clause selection") {
  Valuation unit_as_xos = Valuation::xos(3, {{1 + kEps, 0, 0}, {0, 1 + 2 * kEps, 0}, {0, 0, 1 + 3 * kEps}});
  CHECK(xos_clause(unit_as_xos, make_set(3, {2})) == std::vector<Value>{0, 0, 1 + 3 * kEps});
  Valuation add = Valuation::additive({1, 2, 3});
  CHECK(xos_clause(add, make_set(3, {0, 2})) == std::vector<Value>{1, 0, 3});
  Valuation two = Valuation::xos(2, {{2, 0}, {1, 1}});
  CHECK(xos_clause(two, full_set(2)) == std::vector<Value>{2, 0});
  CHECK_THROWS(xos_clause(Valuation::budgeted_additive({1, 1}, 1), full_set(2)));
}

TEST_CASE("class checks") {
  CHECK(check_class(Valuation::budgeted_additive({1, 1, 1}, 2), ValuationClass::subadditive).holds);
  auto hard = gf2::build_hard_instance(2);
  Instance i2 = hard.instance();
  CHECK(check_class(i2.valuation(1), ValuationClass::subadditive).holds);
  CHECK(check_class(i2.valuation(1), ValuationClass::monotone).holds);

  std::vector<Value> table{0, 1, 1, 3};
  auto c = check_class(Valuation::explicit_table(2, table), ValuationClass::subadditive);
  CHECK_FALSE(c.holds);
  CHECK(((c.witness_s == make_set(2, {0}) && c.witness_t == make_set(2, {1})) ||
         (c.witness_s == make_set(2, {1}) && c.witness_t == make_set(2, {0}))));
}

TEST_CASE("additive under-approximation examples") {
  // f additive on D = {1,2,3}
  std::vector<Value> w{1, q("1/2"), 3};
  std::vector<Value> f(8);
  for (std::uint64_t mask = 0; mask < 8; ++mask)
    for (std::size_t j = 0; j < 3; ++j)
      if (mask >> j & 1) f[mask] += w[j];
  auto a = additive_underapprox(f, 3);
  CHECK(a.weights == w);
  CHECK(a.ratio == 1);

  std::vector<Value> ones(16, 1);
  ones[0] = 0;
  auto b = additive_underapprox(ones, 4);
  CHECK(b.lp_optimum == 1);
  CHECK(b.ratio == 1);
  for (const auto& x : b.weights) CHECK(x > 0);

  auto hard = gf2::build_hard_instance(2);
  Instance i2 = hard.instance();
  const Valuation& v1 = i2.valuation(0);
  std::vector<Value> g(8);
  for (std::uint64_t mask = 0; mask < 8; ++mask) g[mask] = v1.value_mask(mask);
  auto c = additive_underapprox(g, 3);
  CHECK(c.weights == std::vector<Value>{q("1/2"), q("1/2"), q("1/2")});
  CHECK(c.ratio == q("3/4"));
}

TEST_CASE("generators are deterministic and in class") {
  GeneratorParams p{4, 3, 10};
  auto a = generate(GeneratedKind::xos, p, 7), b = generate(GeneratedKind::xos, p, 7);
  CHECK(a.table() == b.table());
  CHECK(xos_clauses(a) == xos_clauses(b));
  for (const auto& clause : xos_clauses(a))
    for (const auto& x : clause) CHECK(Value(x * 1000).get_den() == 1);

  CHECK(check_class(generate(GeneratedKind::budgeted_additive, {5, 3, 10}, 1), ValuationClass::subadditive).holds);
  auto cov = generate(GeneratedKind::coverage, {6, 3, 10}, 2);
  CHECK(check_class(cov, ValuationClass::xos_consistent).holds);
  // Independent clause construction: a coverage function is the max over S of the
  // additive clause that charges each covered element to its first covering item.
  const auto& data = std::get<CoverageKind>(cov.data());
  for (std::uint64_t mask = 0; mask < 64; ++mask) {
    ItemSet s = from_mask(mask, 6);
    ItemSet seen = empty_set(data.ground_weights.size());
    Value clause_sum = 0;
    for (std::size_t j = 0; j < 6; ++j) {
      if (!s.test(j)) continue;
      ItemSet fresh = data.covers[j] - seen;
      for (auto e : members(fresh)) clause_sum += data.ground_weights[e];
      seen |= data.covers[j];
    }
    CHECK(clause_sum == cov.value(s));
  }
}

TEST_CASE("demand oracle agrees with brute force") {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    for (const auto& v : sample_valuations(seed, 2 + seed % 6)) {
      const std::size_t m = v.items();
      for (int round = 0; round < 8; ++round) {
        std::vector<Value> prices(m);
        for (auto& p : prices) p = random_price(rng);
        std::vector<ItemSet> argmax;
        Value best = brute_best(v, prices, &argmax);
        auto all = demand(v, {prices, DemandMode::all});
        CHECK(all.utility == best);
        CHECK(all.sets.size() == argmax.size());
        CHECK(best_utility(v, prices) == best);
        CHECK(residual_utility(v, prices, demand_set(v, prices)) == best);
        for (const auto& s : demand_sets(v, {prices, DemandMode::inclusion_minimal})) {
          CHECK(residual_utility(v, prices, s) == best);
          std::uint64_t sm = to_mask(s);
          for (std::uint64_t sub = (sm - 1) & sm; sub != sm; sub = (sub - 1) & sm) {
            CHECK(residual_utility(v, prices, from_mask(sub, m)) < best);
            if (sub == 0) break;
          }
        }
      }
    }
  }
}

TEST_CASE("xos consistency: value is the max clause sum") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (const auto& v : sample_valuations(seed, 5)) {
      if (!v.has_clauses()) continue;
      auto clauses = xos_clauses(v);
      for (std::uint64_t mask = 0; mask < 32; ++mask) {
        Value best = 0;
        for (const auto& c : clauses) {
          Value sum = 0;
          for (std::size_t j = 0; j < 5; ++j)
            if (mask >> j & 1) sum += c[j];
          best = std::max(best, sum);
        }
        CHECK(best == v.value_mask(mask));
        ItemSet s = from_mask(mask, 5);
        auto c = xos_clause(v, s);
        Value sum = 0;
        for (std::size_t j = 0; j < 5; ++j) {
          if (!s.test(j)) CHECK(c[j] == 0);
          sum += c[j];
        }
        CHECK(sum == v.value(s));
      }
    }
  }
}

TEST_CASE("under-approximation is feasible and meets 1/H") {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; checked < 200; ++seed) {
    std::size_t d = 1 + seed % 8;
    auto kind = seed % 2 ? GeneratedKind::coverage : GeneratedKind::budgeted_additive;
    auto v = generate(kind, {d, 3, 8}, seed);
    std::vector<Value> f(std::size_t{1} << d);
    bool positive = true;
    for (std::uint64_t mask = 0; mask < f.size(); ++mask) {
      f[mask] = v.value_mask(mask);
      if (mask && f[mask] <= 0) positive = false;
    }
    if (!positive) continue;
    ++checked;
    auto a = additive_underapprox(f, d);
    for (std::uint64_t mask = 1; mask < f.size(); ++mask) {
      Value sum = 0;
      for (std::size_t j = 0; j < d; ++j)
        if (mask >> j & 1) sum += a.weights[j];
      CHECK(sum <= f[mask]);
    }
    Value total = 0;
    for (const auto& x : a.weights) {
      CHECK(x > 0);
      total += x;
    }
    CHECK(a.ratio == total / f.back());
    CHECK(a.ratio * harmonic(d) >= 1);
  }
}

TEST_CASE("under-approximation rejects nonpositive inputs") {
  std::vector<Value> f{0, 1, 0, 1};
  CHECK_THROWS(additive_underapprox(f, 2));
}
