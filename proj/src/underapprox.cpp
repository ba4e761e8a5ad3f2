#include "auction/underapprox.hpp"

#include "auction/exact_lp.hpp"

#include <algorithm>
#include <stdexcept>

namespace auction {

namespace {

std::vector<Value> subset_sums(const std::vector<Value>& a, std::size_t d) {
  std::vector<Value> s(std::size_t{1} << d);
  s[0] = 0;
  for (std::size_t mask = 1; mask < s.size(); ++mask)
    s[mask] = s[mask & (mask - 1)] + a[static_cast<std::size_t>(__builtin_ctzll(mask))];
  return s;
}

void check_table(const std::vector<Value>& f, std::size_t d) {
  if (d > kUnderapproxLimit) throw std::length_error("additive under-approximation limited to 16 items");
  if (f.size() != (std::size_t{1} << d)) throw std::invalid_argument("set function table must have 2^d entries");
}

constexpr std::size_t kCutsPerRound = 8;

}  // namespace

std::vector<Value> max_additive_support(const std::vector<Value>& f, std::size_t d) {
  check_table(f, d);
  if (d == 0) return {};
  for (const auto& x : f)
    if (sgn(x) < 0) throw std::invalid_argument("set function must be nonnegative");

  const std::size_t full = (std::size_t{1} << d) - 1;
  std::vector<std::size_t> working;
  for (std::size_t j = 0; j < d; ++j) working.push_back(std::size_t{1} << j);
  if (d > 1) working.push_back(full);

  const std::vector<Value> ones(d, Value(1));
  for (;;) {
    std::vector<std::vector<Value>> rows;
    std::vector<Value> rhs;
    for (std::size_t mask : working) {
      std::vector<Value> row(d, Value(0));
      for (std::size_t j = 0; j < d; ++j)
        if ((mask >> j) & 1U) row[j] = 1;
      rows.push_back(std::move(row));
      rhs.push_back(f[mask]);
    }
    auto sol = maximize_from_origin(rows, rhs, ones);

    auto sums = subset_sums(sol.x, d);
    std::vector<std::pair<Value, std::size_t>> violated;
    for (std::size_t mask = 1; mask <= full; ++mask) {
      Value excess = sums[mask] - f[mask];
      if (sgn(excess) > 0) violated.emplace_back(std::move(excess), mask);
    }
    if (violated.empty()) return sol.x;
    std::stable_sort(violated.begin(), violated.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    for (std::size_t k = 0; k < violated.size() && k < kCutsPerRound; ++k) working.push_back(violated[k].second);
  }
}

bool underapprox_feasible(const std::vector<Value>& f, std::size_t d, const std::vector<Value>& a,
                          std::uint64_t* violated) {
  check_table(f, d);
  if (a.size() != d) return false;
  auto sums = subset_sums(a, d);
  for (std::size_t mask = 0; mask < sums.size(); ++mask)
    if (sums[mask] > f[mask]) {
      if (violated) *violated = mask;
      return false;
    }
  return true;
}

Underapprox additive_underapprox(const std::vector<Value>& f, std::size_t d) {
  check_table(f, d);
  for (std::size_t mask = 1; mask < f.size(); ++mask)
    if (sgn(f[mask]) <= 0)
      throw std::domain_error("additive under-approximation needs f(S) > 0 on every nonempty subset");

  Underapprox out;
  out.delta = 0;
  if (d == 0) {
    out.lp_optimum = 0;
    out.ratio = 1;
    return out;
  }
  const std::size_t full = (std::size_t{1} << d) - 1;
  out.weights = max_additive_support(f, d);
  out.lp_optimum = 0;
  for (const auto& x : out.weights) out.lp_optimum += x;

  bool has_zero = std::any_of(out.weights.begin(), out.weights.end(), [](const Value& x) { return sgn(x) == 0; });
  if (has_zero) {
    // u_j = min_{S containing j} f(S) / d is feasible, so blending keeps feasibility.
    std::vector<Value> u(d);
    std::vector<bool> seen(d, false);
    for (std::size_t mask = 1; mask <= full; ++mask)
      for (std::size_t j = 0; j < d; ++j)
        if (((mask >> j) & 1U) && (!seen[j] || f[mask] < u[j])) {
          u[j] = f[mask];
          seen[j] = true;
        }
    Value u_sum = 0;
    for (auto& x : u) {
      x /= static_cast<unsigned long>(d);
      u_sum += x;
    }
    Value delta(1, 1000);
    Value floor_sum = f[full] / harmonic(d);
    if (u_sum < out.lp_optimum && out.lp_optimum > floor_sum) {
      // Largest blend that stays at or above the 1/H_d floor, halved to stay strictly above.
      Value cap = (out.lp_optimum - floor_sum) / (out.lp_optimum - u_sum) / 2;
      if (cap < delta) delta = cap;
    }
    for (std::size_t j = 0; j < d; ++j) out.weights[j] = (1 - delta) * out.weights[j] + delta * u[j];
    out.repaired = true;
    out.delta = delta;
  }
  Value sum = 0;
  for (const auto& x : out.weights) sum += x;
  out.ratio = sum / f[full];
  std::uint64_t bad = 0;
  if (!underapprox_feasible(f, d, out.weights, &bad))
    throw std::logic_error("additive under-approximation violates constraint " + std::to_string(bad));
  return out;
}

}  // namespace auction
