#include "auction/valuation.hpp"

#include "auction/underapprox.hpp"

#include <mutex>
#include <stdexcept>

namespace auction {

struct Valuation::Cache {
  std::once_flag once;
  std::vector<Value> table;
};

namespace {

void require_nonnegative(const std::vector<Value>& w, const char* what) {
  for (const auto& x : w)
    if (sgn(x) < 0) throw std::invalid_argument(std::string(what) + " must be nonnegative");
}

template <class F>
void for_each_bit(std::uint64_t mask, F&& f) {
  while (mask) {
    f(static_cast<std::size_t>(__builtin_ctzll(mask)));
    mask &= mask - 1;
  }
}

}  // namespace

Valuation::Valuation(std::size_t m, Data data)
    : m_(m), data_(std::make_shared<const Data>(std::move(data))), cache_(std::make_shared<Cache>()) {}

Valuation Valuation::additive(std::vector<Value> weights) {
  require_nonnegative(weights, "additive weights");
  std::size_t m = weights.size();
  return Valuation(m, AdditiveKind{std::move(weights)});
}

Valuation Valuation::unit_demand(std::vector<Value> weights) {
  require_nonnegative(weights, "unit-demand weights");
  std::size_t m = weights.size();
  return Valuation(m, UnitDemandKind{std::move(weights)});
}

Valuation Valuation::xos(std::size_t m, std::vector<std::vector<Value>> clauses) {
  if (clauses.empty()) throw std::invalid_argument("XOS valuation needs at least one clause");
  for (const auto& c : clauses) {
    if (c.size() != m) throw std::invalid_argument("XOS clause has wrong length");
    require_nonnegative(c, "XOS clause weights");
  }
  return Valuation(m, XosKind{std::move(clauses)});
}

Valuation Valuation::budgeted_additive(std::vector<Value> weights, Value budget) {
  require_nonnegative(weights, "budgeted-additive weights");
  if (sgn(budget) < 0) throw std::invalid_argument("budget must be nonnegative");
  std::size_t m = weights.size();
  return Valuation(m, BudgetedAdditiveKind{std::move(weights), std::move(budget)});
}

Valuation Valuation::coverage(std::size_t m, std::vector<Value> ground_weights, std::vector<ItemSet> covers) {
  require_nonnegative(ground_weights, "coverage ground weights");
  if (covers.size() != m) throw std::invalid_argument("coverage needs one covered subset per item");
  for (auto& c : covers) {
    if (c.size() != ground_weights.size()) throw std::invalid_argument("covered subset has wrong ground size");
  }
  return Valuation(m, CoverageKind{std::move(ground_weights), std::move(covers)});
}

Valuation Valuation::explicit_table(std::size_t m, std::vector<Value> table) {
  if (m > 20) throw std::length_error("explicit table limited to 20 items");
  if (table.size() != (std::size_t{1} << m)) throw std::invalid_argument("explicit table must have 2^m entries");
  if (table[0] != 0) throw std::invalid_argument("explicit table must satisfy v(empty) = 0");
  require_nonnegative(table, "explicit table values");
  return Valuation(m, ExplicitTableKind{std::move(table)});
}

Valuation Valuation::mph(std::size_t m, std::size_t rank, std::vector<std::vector<Hyperedge>> clauses) {
  if (clauses.empty()) throw std::invalid_argument("MPH valuation needs at least one clause");
  for (const auto& clause : clauses)
    for (const auto& e : clause) {
      if (e.items.size() != m) throw std::invalid_argument("hyperedge has wrong item width");
      if (e.items.none() || e.items.count() > rank) throw std::invalid_argument("hyperedge size must be in 1..rank");
      if (sgn(e.weight) < 0) throw std::invalid_argument("hyperedge weight must be nonnegative");
    }
  return Valuation(m, MphKind{rank, std::move(clauses)});
}

Valuation Valuation::structured(std::shared_ptr<const StructuredValuation> impl) {
  if (!impl) throw std::invalid_argument("null structured valuation");
  std::size_t m = impl->items();
  return Valuation(m, StructuredKind{std::move(impl)});
}

std::string Valuation::kind_name() const {
  struct Name {
    std::string operator()(const AdditiveKind&) const { return "additive"; }
    std::string operator()(const UnitDemandKind&) const { return "unit_demand"; }
    std::string operator()(const XosKind&) const { return "xos"; }
    std::string operator()(const BudgetedAdditiveKind&) const { return "budgeted_additive"; }
    std::string operator()(const CoverageKind&) const { return "coverage"; }
    std::string operator()(const ExplicitTableKind&) const { return "explicit_table"; }
    std::string operator()(const MphKind&) const { return "mph"; }
    std::string operator()(const StructuredKind& s) const { return s.impl->kind_name(); }
  };
  return std::visit(Name{}, *data_);
}

bool Valuation::has_clauses() const {
  return std::holds_alternative<AdditiveKind>(*data_) || std::holds_alternative<UnitDemandKind>(*data_) ||
         std::holds_alternative<XosKind>(*data_);
}

Value Valuation::value(const ItemSet& s) const {
  if (s.size() != m_) throw std::invalid_argument("item set width does not match valuation");
  if (auto* st = std::get_if<StructuredKind>(data_.get())) return st->impl->value(s);
  if (m_ <= 64) return value_mask(to_mask(s));
  throw std::length_error("valuation wider than 64 items needs a structured kind");
}

Value Valuation::value_mask(std::uint64_t mask) const {
  struct Eval {
    std::uint64_t mask;
    std::size_t m;
    Value operator()(const AdditiveKind& a) const {
      Value s = 0;
      for_each_bit(mask, [&](std::size_t j) { s += a.weights[j]; });
      return s;
    }
    Value operator()(const UnitDemandKind& u) const {
      Value s = 0;
      for_each_bit(mask, [&](std::size_t j) {
        if (u.weights[j] > s) s = u.weights[j];
      });
      return s;
    }
    Value operator()(const XosKind& x) const {
      Value best = 0;
      for (const auto& c : x.clauses) {
        Value s = 0;
        for_each_bit(mask, [&](std::size_t j) { s += c[j]; });
        if (s > best) best = s;
      }
      return best;
    }
    Value operator()(const BudgetedAdditiveKind& b) const {
      Value s = 0;
      for_each_bit(mask, [&](std::size_t j) { s += b.weights[j]; });
      return s < b.budget ? s : b.budget;
    }
    Value operator()(const CoverageKind& c) const {
      ItemSet covered(c.ground_weights.size());
      for_each_bit(mask, [&](std::size_t j) { covered |= c.covers[j]; });
      Value s = 0;
      for (auto g = covered.find_first(); g != ItemSet::npos; g = covered.find_next(g)) s += c.ground_weights[g];
      return s;
    }
    Value operator()(const ExplicitTableKind& t) const { return t.table[mask]; }
    Value operator()(const MphKind& h) const {
      ItemSet s = from_mask(mask, m);
      Value best = 0;
      for (const auto& clause : h.clauses) {
        Value total = 0;
        for (const auto& e : clause)
          if (e.items.is_subset_of(s)) total += e.weight;
        if (total > best) best = total;
      }
      return best;
    }
    Value operator()(const StructuredKind& st) const { return st.impl->value(from_mask(mask, m)); }
  };
  if (m_ < 64 && (mask >> m_) != 0) throw std::invalid_argument("mask has bits beyond the item count");
  return std::visit(Eval{mask, m_}, *data_);
}

const std::vector<Value>& Valuation::table() const {
  if (m_ > kTableLimit) throw std::length_error("value table limited to 16 items");
  std::call_once(cache_->once, [this] {
    std::size_t size = std::size_t{1} << m_;
    cache_->table.resize(size);
    for (std::size_t mask = 0; mask < size; ++mask) cache_->table[mask] = value_mask(mask);
  });
  return cache_->table;
}

std::vector<std::vector<Value>> xos_clauses(const Valuation& v) {
  const std::size_t m = v.items();
  if (auto* a = std::get_if<AdditiveKind>(&v.data())) return {a->weights};
  if (auto* u = std::get_if<UnitDemandKind>(&v.data())) {
    std::vector<std::vector<Value>> out;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<Value> c(m, Value(0));
      c[j] = u->weights[j];
      out.push_back(std::move(c));
    }
    return out;
  }
  if (auto* x = std::get_if<XosKind>(&v.data())) return x->clauses;
  throw std::invalid_argument("valuation of kind " + v.kind_name() + " has no XOS clauses");
}

std::vector<Value> xos_clause(const Valuation& v, const ItemSet& s) {
  if (auto* c = std::get_if<CoverageKind>(&v.data())) {
    // Each covered ground element is credited to the first item of S covering it.
    std::vector<Value> out(v.items(), Value(0));
    ItemSet taken(c->ground_weights.size());
    for (auto j = s.find_first(); j != ItemSet::npos; j = s.find_next(j)) {
      ItemSet fresh = c->covers[j] - taken;
      for (auto g = fresh.find_first(); g != ItemSet::npos; g = fresh.find_next(g)) out[j] += c->ground_weights[g];
      taken |= fresh;
    }
    return out;
  }
  auto clauses = xos_clauses(v);
  std::size_t best = 0;
  Value best_sum = -1;
  for (std::size_t l = 0; l < clauses.size(); ++l) {
    Value sum = 0;
    for (auto j = s.find_first(); j != ItemSet::npos; j = s.find_next(j)) sum += clauses[l][j];
    if (sum > best_sum) {
      best_sum = sum;
      best = l;
    }
  }
  std::vector<Value> out(v.items(), Value(0));
  for (auto j = s.find_first(); j != ItemSet::npos; j = s.find_next(j)) out[j] = clauses[best][j];
  return out;
}

Value residual_utility(const Valuation& v, const std::vector<Value>& prices, const ItemSet& s) {
  Value u = v.value(s);
  for (auto j = s.find_first(); j != ItemSet::npos; j = s.find_next(j)) u -= prices.at(j);
  return u;
}

ClassCheck check_class(const Valuation& v, ValuationClass cls) {
  const std::size_t m = v.items();
  if (m > Valuation::kTableLimit) throw std::length_error("class check limited to 16 items");
  const auto& t = v.table();
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  ClassCheck result;
  auto fail = [&](std::uint64_t s, std::uint64_t u) {
    result.holds = false;
    result.witness_s = from_mask(s, m);
    result.witness_t = from_mask(u, m);
    return result;
  };

  switch (cls) {
    case ValuationClass::monotone:
      // Single-item extensions suffice.
      for (std::uint64_t s = 0; s <= full; ++s)
        for (std::size_t j = 0; j < m; ++j)
          if (!((s >> j) & 1U) && t[s | (std::uint64_t{1} << j)] < t[s])
            return fail(s | (std::uint64_t{1} << j), s);
      return result;

    case ValuationClass::subadditive: {
      bool monotone = check_class(v, ValuationClass::monotone).holds;
      for (std::uint64_t s = 1; s <= full; ++s) {
        // Monotone functions only need disjoint pairs; otherwise scan all T.
        std::uint64_t rest = monotone ? (full & ~s) : full;
        for (std::uint64_t u = rest;; u = (u - 1) & rest) {
          if (u != 0 && t[s | u] > t[s] + t[u]) {
            std::uint64_t a = std::min(s, u), b = std::max(s, u);
            return fail(a, b);
          }
          if (u == 0) break;
        }
      }
      return result;
    }

    case ValuationClass::xos_consistent: {
      if (v.has_clauses()) {
        auto clauses = xos_clauses(v);
        for (std::uint64_t s = 1; s <= full; ++s) {
          Value best = 0;
          for (const auto& c : clauses) {
            Value sum = 0;
            for_each_bit(s, [&](std::size_t j) { sum += c[j]; });
            if (sum > best) best = sum;
          }
          if (best != t[s]) return fail(s, s);
        }
        return result;
      }
      if (m > 10) throw std::length_error("xos-consistency check for this kind limited to 10 items");
      // XOS iff every S has an additive a >= 0 with a(S) = v(S) and a(T) <= v(T) for T within S.
      for (std::uint64_t s = 1; s <= full; ++s) {
        std::vector<std::size_t> idx;
        for_each_bit(s, [&](std::size_t j) { idx.push_back(j); });
        std::vector<Value> f(std::size_t{1} << idx.size());
        for (std::size_t local = 0; local < f.size(); ++local) {
          std::uint64_t global = 0;
          for (std::size_t b = 0; b < idx.size(); ++b)
            if ((local >> b) & 1U) global |= std::uint64_t{1} << idx[b];
          f[local] = t[global];
        }
        auto a = max_additive_support(f, idx.size());
        Value sum = 0;
        for (const auto& x : a) sum += x;
        if (sum != t[s]) return fail(s, s);
      }
      return result;
    }
  }
  return result;
}

}  // namespace auction
