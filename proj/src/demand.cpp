#include "auction/demand.hpp"

#include <algorithm>
#include <stdexcept>

namespace auction {

namespace {

DemandResult exhaustive(const Valuation& v, const std::vector<Value>& prices, bool collect_all) {
  const std::size_t m = v.items();
  if (m > kDemandLimit) throw std::length_error("exhaustive demand oracle limited to 20 items");
  const std::vector<Value>* table = m <= Valuation::kTableLimit ? &v.table() : nullptr;
  auto value_of = [&](std::uint64_t mask) { return table ? (*table)[mask] : v.value_mask(mask); };

  const std::uint64_t count = std::uint64_t{1} << m;
  Value price_sum = 0;
  std::uint64_t best_mask = 0;
  Value best = 0;
  std::vector<std::uint64_t> ties{0};
  std::uint64_t gray = 0;
  for (std::uint64_t g = 1; g < count; ++g) {
    auto bit = static_cast<std::size_t>(__builtin_ctzll(g));
    gray ^= std::uint64_t{1} << bit;
    if ((gray >> bit) & 1U)
      price_sum += prices[bit];
    else
      price_sum -= prices[bit];
    Value u = value_of(gray) - price_sum;
    int c = cmp(u, best);
    if (c > 0) {
      best = std::move(u);
      best_mask = gray;
      if (collect_all) ties.assign(1, gray);
    } else if (c == 0) {
      if (gray < best_mask) best_mask = gray;
      if (collect_all) ties.push_back(gray);
    }
  }
  DemandResult out;
  out.utility = best;
  if (collect_all) {
    std::sort(ties.begin(), ties.end());
    for (auto t : ties) out.sets.push_back(from_mask(t, m));
  } else {
    out.sets.push_back(from_mask(best_mask, m));
  }
  return out;
}

}  // namespace

DemandResult demand(const Valuation& v, const DemandQuery& query) {
  if (query.prices.size() != v.items()) throw std::invalid_argument("price vector has wrong length");
  for (const auto& p : query.prices)
    if (sgn(p) < 0) throw std::invalid_argument("prices must be nonnegative");
  if (query.mode != DemandMode::all) {
    if (auto* st = std::get_if<StructuredKind>(&v.data())) {
      if (auto d = st->impl->demand(query.prices)) {
        DemandResult out;
        out.utility = residual_utility(v, query.prices, *d);
        out.sets.push_back(std::move(*d));
        return out;
      }
    }
  }
  return exhaustive(v, query.prices, query.mode == DemandMode::all);
}

std::vector<ItemSet> demand_sets(const Valuation& v, const DemandQuery& query) { return demand(v, query).sets; }

ItemSet demand_set(const Valuation& v, const std::vector<Value>& prices) {
  return demand(v, {prices, DemandMode::inclusion_minimal}).sets.front();
}

Value best_utility(const Valuation& v, const std::vector<Value>& prices) {
  return demand(v, {prices, DemandMode::any_max}).utility;
}

}  // namespace auction
