#include "auction/strategies.hpp"

#include "auction/underapprox.hpp"

#include <stdexcept>

namespace auction {

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::xos_update: return "xos_update";
    case StrategyKind::subadditive_no_overbid: return "subadditive_no_overbid";
    case StrategyKind::subadditive_aggressive: return "subadditive_aggressive";
    case StrategyKind::potential_procedure: return "potential_procedure";
    case StrategyKind::scripted: return "scripted";
    case StrategyKind::hold: return "hold";
  }
  return "unknown";
}

StrategyKind parse_strategy_kind(const std::string& name) {
  for (auto k : {StrategyKind::xos_update, StrategyKind::subadditive_no_overbid, StrategyKind::subadditive_aggressive,
                 StrategyKind::potential_procedure, StrategyKind::scripted, StrategyKind::hold})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown strategy \"" + name + "\"");
}

namespace {

BidProfile with_row(const BidProfile& bids, std::size_t i, const BidRow& row) {
  BidProfile next = bids;
  next.rows.at(i) = row;
  return next;
}

void finish(UpdateReport& r, const Instance& instance, const BidProfile& bids, const TieBreak& tie, std::size_t i,
            const AllocationOptions& options) {
  const auto& v = instance.valuation(i);
  auto prices = opposing_maxima(bids, i);
  auto next = with_row(bids, i, r.row);
  auto out = allocate(instance, next, tie, options);
  r.declared_utility = out.declared_utility[i];
  r.best_utility = best_utility(v, prices);
  r.alpha = Ratio::of(r.declared_utility, r.best_utility);
  if (instance.m() <= Valuation::kTableLimit) r.strong = check_no_overbidding(v, r.row, OverbidMode::strong).holds;
  r.weak = check_no_overbidding(v, r.row, OverbidMode::weak, out.allocation[i]).holds;
  r.grand = check_no_overbidding(v, r.row, OverbidMode::grand).holds;
}

// Residual utility table on the subsets of D (local bit b is the b-th item of D).
std::vector<Value> residual_table(const Valuation& v, const std::vector<Value>& prices,
                                  const std::vector<std::size_t>& d_items) {
  const std::size_t d = d_items.size();
  if (d > kUnderapproxLimit) throw std::length_error("demand set larger than 16 items");
  const std::size_t m = v.items();
  const std::vector<Value>* table = m <= Valuation::kTableLimit ? &v.table() : nullptr;
  std::vector<Value> f(std::size_t{1} << d);
  std::vector<Value> price_sum(f.size());
  std::vector<std::uint64_t> global(f.size());
  price_sum[0] = 0;
  global[0] = 0;
  f[0] = 0;
  for (std::size_t local = 1; local < f.size(); ++local) {
    auto b = static_cast<std::size_t>(__builtin_ctzll(local));
    std::size_t rest = local & (local - 1);
    price_sum[local] = price_sum[rest] + prices[d_items[b]];
    if (m <= 64) {
      global[local] = global[rest] | (std::uint64_t{1} << d_items[b]);
      f[local] = (table ? (*table)[global[local]] : v.value_mask(global[local])) - price_sum[local];
    } else {
      ItemSet s(m);
      for (std::size_t k = 0; k < d; ++k)
        if ((local >> k) & 1U) s.set(d_items[k]);
      f[local] = v.value(s) - price_sum[local];
    }
  }
  return f;
}

UpdateReport subadditive_update(const Instance& instance, const BidProfile& bids, const TieBreak& tie, std::size_t i,
                                const AllocationOptions& options, bool aggressive) {
  const auto& v = instance.valuation(i);
  auto prices = opposing_maxima(bids, i);
  UpdateReport r;
  r.demand = demand_set(v, prices);
  r.row.assign(instance.m(), Value(0));
  if (r.demand.any()) {
    auto d_items = members(r.demand);
    auto f = residual_table(v, prices, d_items);
    auto approx = additive_underapprox(f, d_items.size());
    r.approx_ratio = approx.ratio;
    Value gamma = 1;
    if (aggressive) {
      Value sum = 0;
      for (const auto& a : approx.weights) sum += a;
      gamma = f.back() / sum;
    }
    for (std::size_t b = 0; b < d_items.size(); ++b)
      r.row[d_items[b]] = gamma * approx.weights[b] + prices[d_items[b]];
  }
  finish(r, instance, bids, tie, i, options);
  return r;
}

}  // namespace

UpdateReport xos_update_on(const Instance& instance, const BidProfile& bids, const TieBreak& tie, std::size_t i,
                           const ItemSet& chosen, const AllocationOptions& options) {
  UpdateReport r;
  r.demand = chosen;
  r.row = chosen.any() ? xos_clause(instance.valuation(i), chosen) : BidRow(instance.m(), Value(0));
  finish(r, instance, bids, tie, i, options);
  return r;
}

UpdateReport xos_update(const Instance& instance, const BidProfile& bids, const TieBreak& tie, std::size_t i,
                        const AllocationOptions& options) {
  auto prices = opposing_maxima(bids, i);
  return xos_update_on(instance, bids, tie, i, demand_set(instance.valuation(i), prices), options);
}

UpdateReport subadd_noover_update(const Instance& instance, const BidProfile& bids, const TieBreak& tie,
                                  std::size_t i, const AllocationOptions& options) {
  return subadditive_update(instance, bids, tie, i, options, false);
}

UpdateReport subadd_aggressive_update(const Instance& instance, const BidProfile& bids, const TieBreak& tie,
                                      std::size_t i, const AllocationOptions& options) {
  return subadditive_update(instance, bids, tie, i, options, true);
}

UpdateReport apply_strategy(const Strategy& strategy, std::size_t activation, const Instance& instance,
                            const BidProfile& bids, const TieBreak& tie, std::size_t i,
                            const AllocationOptions& options) {
  if (activation == 0) throw std::invalid_argument("activation count starts at 1");
  switch (strategy.kind) {
    case StrategyKind::xos_update: return xos_update(instance, bids, tie, i, options);
    case StrategyKind::subadditive_no_overbid: return subadd_noover_update(instance, bids, tie, i, options);
    case StrategyKind::subadditive_aggressive: return subadd_aggressive_update(instance, bids, tie, i, options);
    case StrategyKind::potential_procedure: {
      if (strategy.demand_script.empty()) throw std::invalid_argument("potential procedure needs a demand script");
      const ItemSet& chosen = strategy.demand_script[(activation - 1) % strategy.demand_script.size()];
      const auto& v = instance.valuation(i);
      auto prices = opposing_maxima(bids, i);
      if (residual_utility(v, prices, chosen) != best_utility(v, prices))
        throw std::logic_error("scripted set " + format_items(chosen) + " is not a demand set of bidder " +
                               std::to_string(i + 1));
      return xos_update_on(instance, bids, tie, i, chosen, options);
    }
    case StrategyKind::scripted: {
      if (strategy.script.empty()) throw std::invalid_argument("scripted strategy needs at least one row");
      UpdateReport r;
      r.row = strategy.script[(activation - 1) % strategy.script.size()];
      if (r.row.size() != instance.m()) throw std::invalid_argument("scripted row has wrong length");
      for (const auto& x : r.row)
        if (sgn(x) < 0) throw std::invalid_argument("scripted row has a negative bid");
      r.demand = empty_set(instance.m());
      for (std::size_t j = 0; j < r.row.size(); ++j)
        if (sgn(r.row[j]) > 0) r.demand.set(j);
      finish(r, instance, bids, tie, i, options);
      return r;
    }
    case StrategyKind::hold: {
      UpdateReport r;
      r.row = bids.rows.at(i);
      r.demand = empty_set(instance.m());
      finish(r, instance, bids, tie, i, options);
      return r;
    }
  }
  throw std::logic_error("unhandled strategy kind");
}

Ratio measure_aggressiveness(const Instance& instance, const BidProfile& old_bids, const BidRow& new_row,
                             const TieBreak& tie, std::size_t i, const AllocationOptions& options) {
  auto prices = opposing_maxima(old_bids, i);
  Value best = best_utility(instance.valuation(i), prices);
  auto out = allocate(instance, with_row(old_bids, i, new_row), tie, options);
  return Ratio::of(out.declared_utility[i], best);
}

OverbidCheck check_no_overbidding(const Valuation& v, const BidRow& row, OverbidMode mode,
                                  const std::optional<ItemSet>& won) {
  const std::size_t m = v.items();
  if (row.size() != m) throw std::invalid_argument("bid row has wrong length");
  OverbidCheck result;
  auto check_set = [&](const ItemSet& s) {
    Value sum = 0;
    for (auto j = s.find_first(); j != ItemSet::npos; j = s.find_next(j)) sum += row[j];
    if (sum > v.value(s)) {
      result.holds = false;
      result.witness = s;
    }
  };
  switch (mode) {
    case OverbidMode::grand:
      check_set(full_set(m));
      return result;
    case OverbidMode::weak:
      if (!won) throw std::invalid_argument("weak no-overbidding needs the won set");
      check_set(*won);
      return result;
    case OverbidMode::strong: {
      if (m > Valuation::kTableLimit) throw std::length_error("strong no-overbidding check limited to 16 items");
      const auto& t = v.table();
      std::vector<Value> sums(t.size());
      sums[0] = 0;
      for (std::size_t s = 1; s < t.size(); ++s) {
        sums[s] = sums[s & (s - 1)] + row[static_cast<std::size_t>(__builtin_ctzll(s))];
        if (sums[s] > t[s]) {
          result.holds = false;
          result.witness = from_mask(s, m);
          return result;
        }
      }
      return result;
    }
  }
  return result;
}

SafetyReport check_safety(const Trace& trace, const Value& beta) {
  SafetyReport r;
  r.sup_ratio = 1;
  r.beta_min = 1;
  for (std::size_t t = 0; t <= trace.length(); ++t) {
    const auto& out = trace.outcome(t);
    for (std::size_t i = 0; i < out.utility.size(); ++i) {
      const Value& ud = out.declared_utility[i];
      const Value& u = out.utility[i];
      bool infeasible = sgn(u) < 0 || (sgn(u) == 0 && sgn(ud) > 0);
      if (infeasible) {
        if (r.feasible) {
          r.worst_t = t;
          r.worst_bidder = i;
        }
        r.feasible = false;
        r.holds = false;
        continue;
      }
      if (sgn(u) == 0) continue;  // 0/0 counts as ratio 1
      Value ratio = ud / u;
      if (ratio > r.sup_ratio) {
        r.sup_ratio = ratio;
        if (r.feasible) {
          r.worst_t = t;
          r.worst_bidder = i;
        }
      }
      if (ud > beta * u) r.holds = false;
    }
  }
  if (r.feasible) r.beta_min = r.sup_ratio > 1 ? r.sup_ratio : Value(1);
  return r;
}

}  // namespace auction
