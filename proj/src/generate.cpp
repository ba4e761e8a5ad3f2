#include "auction/valuation.hpp"

#include <random>
#include <stdexcept>

namespace auction {

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool chance(long percent) { return integer(0, 99) < percent; }
  Value thousandths(long lo, long hi) {
    Value v(integer(lo, hi), 1000);
    v.canonicalize();
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

Valuation set_cover_cost(std::size_t m, Draw& draw) {
  if (m > 12) throw std::invalid_argument("set-cover cost generator limited to 12 items");
  std::vector<std::pair<std::uint64_t, Value>> family;
  for (std::size_t j = 0; j < m; ++j) family.emplace_back(std::uint64_t{1} << j, draw.thousandths(500, 1000));
  for (std::size_t extra = 0; extra < m; ++extra) {
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (draw.chance(40)) mask |= std::uint64_t{1} << j;
    if (__builtin_popcountll(mask) >= 2) family.emplace_back(mask, draw.thousandths(300, 1500));
  }
  std::vector<Value> f(std::size_t{1} << m);
  f[0] = 0;
  for (std::uint64_t s = 1; s < f.size(); ++s) {
    std::uint64_t low = s & (~s + 1);
    bool first = true;
    for (const auto& [set, cost] : family) {
      if (!(set & low)) continue;
      Value candidate = cost + f[s & ~set];
      if (first || candidate < f[s]) f[s] = candidate;
      first = false;
    }
  }
  return Valuation::explicit_table(m, std::move(f));
}

}  // namespace

Valuation generate(GeneratedKind kind, const GeneratorParams& params, std::uint64_t seed) {
  const std::size_t m = params.m;
  if (m == 0) throw std::invalid_argument("generator needs m >= 1");
  Draw draw(seed);
  switch (kind) {
    case GeneratedKind::xos: {
      if (params.clauses == 0) throw std::invalid_argument("XOS generator needs at least one clause");
      std::vector<std::vector<Value>> clauses(params.clauses, std::vector<Value>(m));
      for (auto& c : clauses)
        for (auto& w : c) w = draw.chance(25) ? Value(0) : draw.thousandths(1, 1000);
      return Valuation::xos(m, std::move(clauses));
    }
    case GeneratedKind::budgeted_additive: {
      std::vector<Value> w(m);
      Value total = 0;
      for (auto& x : w) {
        x = draw.thousandths(1, 1000);
        total += x;
      }
      Value budget = total * draw.thousandths(300, 900);
      return Valuation::budgeted_additive(std::move(w), std::move(budget));
    }
    case GeneratedKind::coverage: {
      if (params.ground == 0) throw std::invalid_argument("coverage generator needs a nonempty ground set");
      std::vector<Value> gw(params.ground);
      for (auto& x : gw) x = draw.thousandths(1, 1000);
      std::vector<ItemSet> covers(m, ItemSet(params.ground));
      for (auto& c : covers) {
        for (std::size_t g = 0; g < params.ground; ++g)
          if (draw.chance(30)) c.set(g);
        if (c.none()) c.set(static_cast<std::size_t>(draw.integer(0, static_cast<long>(params.ground) - 1)));
      }
      return Valuation::coverage(m, std::move(gw), std::move(covers));
    }
    case GeneratedKind::set_cover_cost:
      return set_cover_cost(m, draw);
    case GeneratedKind::unit_demand:
    case GeneratedKind::additive: {
      std::vector<Value> w(m);
      for (auto& x : w) x = draw.thousandths(0, 1000);
      return kind == GeneratedKind::additive ? Valuation::additive(std::move(w))
                                             : Valuation::unit_demand(std::move(w));
    }
  }
  throw std::invalid_argument("unknown generator kind");
}

}  // namespace auction
