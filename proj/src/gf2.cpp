#include "auction/gf2.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <limits>
#include <stdexcept>

namespace auction::gf2 {

namespace {

std::size_t item_count(std::size_t k) {
  if (k == 0 || k > 16) throw std::invalid_argument("k must be in 1..16");
  return (std::size_t{1} << k) - 1;
}

std::size_t log2_exact(std::size_t k) {
  std::size_t l = 0;
  while ((std::size_t{1} << l) < k) ++l;
  return l;
}

// Sorting key: 64-bit words of the item set, most significant first.
std::array<std::uint64_t, 4> key_of(const ItemSet& s) {
  std::array<std::uint64_t, 4> key{};
  for (auto j = s.find_first(); j != ItemSet::npos; j = s.find_next(j)) key[3 - j / 64] |= std::uint64_t{1} << (j % 64);
  return key;
}

std::vector<std::uint32_t> span_of(const std::vector<std::uint32_t>& basis) {
  std::vector<std::uint32_t> out;
  const std::size_t d = basis.size();
  for (std::uint32_t c = 1; c < (std::uint32_t{1} << d); ++c) {
    std::uint32_t v = 0;
    for (std::size_t r = 0; r < d; ++r)
      if ((c >> r) & 1U) v ^= basis[r];
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<ItemSet> cover_sets(std::size_t k) {
  const std::size_t m = item_count(k);
  std::vector<ItemSet> out(m, ItemSet(m));
  for (std::uint32_t i = 1; i <= m; ++i)
    for (std::uint32_t j = 1; j <= m; ++j)
      if (dot(i, j)) out[i - 1].set(j - 1);
  return out;
}

std::uint64_t gaussian_binomial(std::size_t k, std::size_t d) {
  if (d > k) return 0;
  // prod_{i<d} (2^{k-i} - 1) / (2^{d-i} - 1), exact at every prefix.
  mpz_class num = 1, den = 1;
  for (std::size_t i = 0; i < d; ++i) {
    num *= (mpz_class(1) << (k - i)) - 1;
    den *= (mpz_class(1) << (d - i)) - 1;
  }
  mpz_class q = num / den;
  return q.get_ui();
}

std::vector<Subspace> enumerate_subspaces(std::size_t k, std::size_t d) {
  if (k > 8) throw std::length_error("subspace enumeration limited to k <= 8");
  if (d == 0 || d > k) throw std::invalid_argument("subspace dimension must be in 1..k");
  const std::size_t m = item_count(k);
  std::vector<Subspace> out;

  // Reduced row echelon bases: row r has leading bit pivot[r]; the other pivot bits
  // are zero in every row; non-pivot bits below the leading bit are free.
  std::vector<std::size_t> pivots(d);
  for (std::uint32_t pmask = 0; pmask < (std::uint32_t{1} << k); ++pmask) {
    if (static_cast<std::size_t>(__builtin_popcount(pmask)) != d) continue;
    std::size_t r = 0;
    for (std::size_t bit = 0; bit < k; ++bit)
      if ((pmask >> bit) & 1U) pivots[r++] = bit;
    std::vector<std::pair<std::size_t, std::size_t>> free;  // (row, bit)
    for (std::size_t row = 0; row < d; ++row)
      for (std::size_t bit = 0; bit < pivots[row]; ++bit)
        if (!((pmask >> bit) & 1U)) free.emplace_back(row, bit);
    for (std::uint64_t fill = 0; fill < (std::uint64_t{1} << free.size()); ++fill) {
      Subspace s;
      s.basis.assign(d, 0);
      for (std::size_t row = 0; row < d; ++row) s.basis[row] = std::uint32_t{1} << pivots[row];
      for (std::size_t f = 0; f < free.size(); ++f)
        if ((fill >> f) & 1U) s.basis[free[f].first] |= std::uint32_t{1} << free[f].second;
      s.vectors = span_of(s.basis);
      s.items = ItemSet(m);
      for (auto v : s.vectors) s.items.set(v - 1);
      out.push_back(std::move(s));
    }
  }
  std::vector<std::pair<std::array<std::uint64_t, 4>, std::size_t>> keys;
  keys.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) keys.emplace_back(key_of(out[i].items), i);
  std::sort(keys.begin(), keys.end());
  std::vector<Subspace> sorted;
  sorted.reserve(out.size());
  for (auto& [key, i] : keys) sorted.push_back(std::move(out[i]));
  return sorted;
}

namespace {

// Exact minimum cover sizes for every T (m <= 15): BFS over unions, then a
// superset-minimum transform.
std::vector<std::uint8_t> exact_cover_table(std::size_t k) {
  const std::size_t m = item_count(k);
  if (m > 15) throw std::length_error("exact cover table limited to m <= 15");
  std::vector<std::uint32_t> covers;
  for (std::uint32_t i = 1; i <= m; ++i) {
    std::uint32_t mask = 0;
    for (std::uint32_t j = 1; j <= m; ++j)
      if (dot(i, j)) mask |= std::uint32_t{1} << (j - 1);
    covers.push_back(mask);
  }
  const std::size_t size = std::size_t{1} << m;
  constexpr std::uint8_t kInf = 255;
  std::vector<std::uint8_t> dist(size, kInf);
  std::deque<std::uint32_t> queue{0};
  dist[0] = 0;
  while (!queue.empty()) {
    std::uint32_t u = queue.front();
    queue.pop_front();
    for (auto c : covers) {
      std::uint32_t w = u | c;
      if (dist[w] == kInf) {
        dist[w] = static_cast<std::uint8_t>(dist[u] + 1);
        queue.push_back(w);
      }
    }
  }
  for (std::size_t bit = 0; bit < m; ++bit)
    for (std::size_t mask = 0; mask < size; ++mask)
      if (!((mask >> bit) & 1U)) dist[mask] = std::min(dist[mask], dist[mask | (std::size_t{1} << bit)]);
  return dist;
}

std::size_t greedy_cover(std::size_t k, const ItemSet& t) {
  auto covers = cover_sets(k);
  ItemSet left = t;
  std::size_t used = 0;
  while (left.any()) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t i = 0; i < covers.size(); ++i) {
      std::size_t gain = (covers[i] & left).count();
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best_gain == 0) throw std::logic_error("cover sets fail to cover the item set");
    left -= covers[best];
    ++used;
  }
  return used;
}

}  // namespace

CoverValue v1_value(std::size_t k, const ItemSet& t) {
  const std::size_t m = item_count(k);
  if (t.size() != m) throw std::invalid_argument("item set width does not match 2^k - 1");
  if (m <= 15) {
    static thread_local std::vector<std::vector<std::uint8_t>> tables(5);
    auto& table = tables[k];
    if (table.empty()) table = exact_cover_table(k);
    return {Value(table[to_mask(t)]), true};
  }
  return {Value(static_cast<unsigned long>(greedy_cover(k, t))), false};
}

std::vector<std::size_t> basis_cover(std::size_t k, const Subspace& d_prime) {
  const std::size_t m = item_count(k);
  std::vector<std::uint32_t> basis = d_prime.basis;
  const std::size_t d = basis.size();
  // Extend greedily by the vectors 1, 2, 3, ... not yet spanned.
  std::vector<bool> spanned(m + 1, false);
  auto refresh = [&] {
    std::fill(spanned.begin(), spanned.end(), false);
    for (auto v : span_of(basis)) spanned[v] = true;
    spanned[0] = true;
  };
  refresh();
  for (std::uint32_t v = 1; v <= m && basis.size() < k; ++v)
    if (!spanned[v]) {
      basis.push_back(v);
      refresh();
    }
  // Dual basis: y_r . x_s = [r == s]. Scan all y and record their signatures.
  std::vector<std::uint32_t> dual(k, 0);
  for (std::uint32_t y = 1; y <= m; ++y) {
    std::uint32_t sig = 0;
    for (std::size_t s = 0; s < k; ++s)
      if (dot(y, basis[s])) sig |= std::uint32_t{1} << s;
    if (__builtin_popcount(sig) == 1) dual[static_cast<std::size_t>(__builtin_ctz(sig))] = y;
  }
  std::vector<std::size_t> out;
  for (std::size_t r = d; r < k; ++r) out.push_back(dual[r]);
  return out;
}

SetCoverValuation::SetCoverValuation(std::size_t k) : k_(k), m_(item_count(k)) {
  if (m_ <= 15) table_ = exact_cover_table(k);
}

Value SetCoverValuation::value(const ItemSet& s) const {
  if (s.size() != m_) throw std::invalid_argument("item set width does not match 2^k - 1");
  if (!table_.empty()) return Value(table_[to_mask(s)]);
  return Value(static_cast<unsigned long>(greedy_cover(k_, s)));
}

SubspaceValuation::SubspaceValuation(std::size_t k, std::shared_ptr<const std::vector<Subspace>> family)
    : k_(k), m_(item_count(k)), family_(std::move(family)) {
  if (!family_ || family_->empty()) throw std::invalid_argument("empty subspace family");
  d_ = family_->front().basis.size();
  rho_ = Value(static_cast<unsigned long>(4 * k_), static_cast<unsigned long>(m_));
  rho_.canonicalize();
}

Value SubspaceValuation::full_value() const {
  return rho_ * Value(static_cast<unsigned long>((std::size_t{1} << d_) - 1));
}

Value SubspaceValuation::half_value() const { return full_value() / 2; }

std::optional<std::size_t> SubspaceValuation::contained_subspace(const ItemSet& s) const {
  for (std::size_t i = 0; i < family_->size(); ++i)
    if ((*family_)[i].items.is_subset_of(s)) return i;
  return std::nullopt;
}

Value SubspaceValuation::value(const ItemSet& s) const {
  if (s.size() != m_) throw std::invalid_argument("item set width does not match 2^k - 1");
  if (s.none()) return 0;
  // Every item lies in some D, so a nonempty set meets at least one D.
  return contained_subspace(s) ? full_value() : half_value();
}

namespace {

ItemSet structured_demand(const SubspaceValuation& v2, const std::vector<Value>& prices, const SubspaceSums& sums) {
  const std::size_t m = v2.items();
  const auto& family = v2.family();
  const bool singletons_are_subspaces = v2.d() == 1;
  const Value full = v2.full_value();
  const Value half = v2.half_value();

  Value min_price = prices[0];
  for (const auto& p : prices)
    if (p < min_price) min_price = p;
  std::vector<std::size_t> cheapest;
  Value min_d = sums.min_sum(&cheapest);

  Value best = 0;
  if (!singletons_are_subspaces && half - min_price > best) best = half - min_price;
  if (full - min_d > best) best = full - min_d;
  if (sgn(best) == 0) return ItemSet(m);

  std::optional<ItemSet> choice;
  auto consider = [&](ItemSet s) {
    if (!choice || mask_less(s, *choice)) choice = std::move(s);
  };
  if (!singletons_are_subspaces && half - min_price == best) {
    for (std::size_t j = 0; j < m; ++j)
      if (prices[j] == min_price) {
        consider(make_set(m, {j}));
        break;
      }
  }
  if (full - min_d == best) {
    for (std::size_t idx : cheapest) {
      const auto& d = family[idx];
      if (!singletons_are_subspaces) {
        // D is minimal unless its cheapest item alone already attains the optimum.
        Value own_min = prices[d.vectors.front() - 1];
        for (auto vec : d.vectors)
          if (prices[vec - 1] < own_min) own_min = prices[vec - 1];
        if (half - own_min == best) continue;
      }
      consider(d.items);
      break;  // cheapest is in enumeration order, which is mask order
    }
  }
  if (!choice) throw std::logic_error("structured demand oracle found no minimal maximizer");
  return *choice;
}

}  // namespace

std::optional<ItemSet> SubspaceValuation::demand(const std::vector<Value>& prices) const {
  if (prices.size() != m_) throw std::invalid_argument("price vector has wrong length");
  SubspaceSums sums(*family_, prices);
  return structured_demand(*this, prices, sums);
}

SubspaceSums::SubspaceSums(const std::vector<Subspace>& family, const std::vector<Value>& prices)
    : count_(family.size()) {
  scale_ = 1;
  for (const auto& p : prices) scale_ = lcm(scale_, mpz_class(p.get_den()));
  const mpz_class limit = mpz_class(1) << 50;
  integral_ = scale_ <= limit;
  std::vector<std::int64_t> scaled;
  if (integral_) {
    for (const auto& p : prices) {
      mpz_class s = p.get_num() * (scale_ / p.get_den());
      if (s > limit) {
        integral_ = false;
        break;
      }
      scaled.push_back(s.get_si());
    }
  }
  if (integral_) {
    int_sums_.resize(count_);
    for (std::size_t i = 0; i < count_; ++i) {
      std::int64_t total = 0;
      for (auto v : family[i].vectors) total += scaled[v - 1];
      int_sums_[i] = total;
    }
  } else {
    sums_.resize(count_);
    for (std::size_t i = 0; i < count_; ++i) {
      Value total = 0;
      for (auto v : family[i].vectors) total += prices[v - 1];
      sums_[i] = total;
    }
  }
}

Value SubspaceSums::sum(std::size_t idx) const {
  if (!integral_) return sums_.at(idx);
  Value v(mpz_class(static_cast<long>(int_sums_.at(idx))), scale_);
  v.canonicalize();
  return v;
}

Value SubspaceSums::min_sum(std::vector<std::size_t>* argmin) const {
  if (argmin) argmin->clear();
  if (count_ == 0) throw std::logic_error("empty subspace family");
  if (integral_) {
    std::int64_t best = *std::min_element(int_sums_.begin(), int_sums_.end());
    if (argmin)
      for (std::size_t i = 0; i < count_; ++i)
        if (int_sums_[i] == best) argmin->push_back(i);
    Value v(mpz_class(static_cast<long>(best)), scale_);
    v.canonicalize();
    return v;
  }
  Value best = sums_[0];
  for (const auto& s : sums_)
    if (s < best) best = s;
  if (argmin)
    for (std::size_t i = 0; i < count_; ++i)
      if (sums_[i] == best) argmin->push_back(i);
  return best;
}

std::optional<std::size_t> SubspaceSums::first_below(const Value& threshold) const {
  if (integral_) {
    // sum / scale < t  <=>  sum <= ceil(t * scale) - 1
    Value q = threshold * Value(scale_);
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    c -= 1;
    if (c < std::numeric_limits<long>::min()) return std::nullopt;
    std::int64_t bound = c > std::numeric_limits<long>::max() ? std::numeric_limits<std::int64_t>::max() : c.get_si();
    for (std::size_t i = 0; i < count_; ++i)
      if (int_sums_[i] <= bound) return i;
    return std::nullopt;
  }
  for (std::size_t i = 0; i < count_; ++i)
    if (sums_[i] < threshold) return i;
  return std::nullopt;
}

Instance HardInstance::instance() const {
  return Instance(m, {Valuation::structured(v1), Valuation::structured(v2)});
}

Value HardInstance::rho_two_to_d() const { return rho * Value(static_cast<unsigned long>(std::size_t{1} << d)); }

HardInstance build_hard_instance(std::size_t k) {
  if (k < 2 || (k & (k - 1)) != 0) throw std::invalid_argument("hard instance needs k a power of two, k >= 2");
  if (k > 8) throw std::length_error("hard instance limited to k <= 8 (subspace enumeration)");
  HardInstance h;
  h.k = k;
  h.m = item_count(k);
  h.d = k - log2_exact(k);
  h.rho = Value(static_cast<unsigned long>(4 * k), static_cast<unsigned long>(h.m));
  h.rho.canonicalize();
  h.covers = cover_sets(k);
  h.family = std::make_shared<const std::vector<Subspace>>(enumerate_subspaces(k, h.d));
  h.v1 = std::make_shared<const SetCoverValuation>(k);
  h.v2 = std::make_shared<const SubspaceValuation>(k, h.family);
  return h;
}

std::optional<std::size_t> cheap_subspace(const HardInstance& hard, const std::vector<Value>& b1) {
  if (b1.size() != hard.m) throw std::invalid_argument("bid row has wrong length");
  SubspaceSums sums(*hard.family, b1);
  Value threshold = hard.rho * Value(static_cast<unsigned long>((std::size_t{1} << hard.d) - 1)) / 2;
  return sums.first_below(threshold);
}

ItemSet v2_demand_set(const HardInstance& hard, const std::vector<Value>& prices, DemandMode mode) {
  if (mode == DemandMode::all) {
    auto sets = demand_sets(Valuation::structured(hard.v2), {prices, DemandMode::all});
    return sets.front();
  }
  return *hard.v2->demand(prices);
}

Deviation construct_deviation(const HardInstance& hard, const BidProfile& bids, const TieBreak& tie) {
  if (bids.n() != 2 || bids.m() != hard.m) throw std::invalid_argument("deviation needs a 2 x m bid profile");
  const std::size_t m = hard.m;
  // Only the allocation matters here; evaluating SW would need v1 exactly.
  ItemSet won(m);
  for (std::size_t j = 0; j < m; ++j) {
    int c = cmp(bids.rows[1][j], bids.rows[0][j]);
    if (c > 0 || (c == 0 && tie.rank(j, 1) < tie.rank(j, 0))) won.set(j);
  }
  auto d_prime = hard.v2->contained_subspace(won);
  if (!d_prime) throw std::domain_error("player 2's won set contains no subspace of the family");

  Deviation dev;
  dev.d_prime = *d_prime;
  const Value step(1, static_cast<unsigned long>(m));
  dev.row = bids.rows[0];
  for (auto j = won.find_first(); j != ItemSet::npos; j = won.find_next(j)) dev.row[j] = bids.rows[1][j] + step;
  dev.bid_sum = 0;
  for (const auto& x : dev.row) dev.bid_sum += x;

  dev.cover = basis_cover(hard.k, (*hard.family)[dev.d_prime]);
  dev.certified_bid_bound = hard.v2->value(won) + 1 + Value(static_cast<unsigned long>(dev.cover.size()));
  dev.weakly_no_overbidding =
      dev.bid_sum <= dev.certified_bid_bound && dev.certified_bid_bound <= Value(static_cast<unsigned long>(hard.k));
  dev.gain_lower_bound = Value(static_cast<unsigned long>(hard.d)) - hard.v2->value(won);

  dev.wins_everything = true;
  for (std::size_t j = 0; j < m; ++j) {
    int c = cmp(dev.row[j], bids.rows[1][j]);
    if (c < 0 || (c == 0 && tie.rank(j, 0) > tie.rank(j, 1))) dev.wins_everything = false;
  }
  return dev;
}

}  // namespace auction::gf2
