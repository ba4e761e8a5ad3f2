#include "auction/exact_lp.hpp"

#include <stdexcept>

namespace auction {

LpSolution maximize_from_origin(const std::vector<std::vector<Value>>& a, const std::vector<Value>& b,
                                const std::vector<Value>& c) {
  const std::size_t rows = a.size();
  const std::size_t cols = c.size();
  if (b.size() != rows) throw std::invalid_argument("LP: right-hand side has wrong length");
  for (const auto& r : a)
    if (r.size() != cols) throw std::invalid_argument("LP: constraint row has wrong length");
  for (const auto& x : b)
    if (sgn(x) < 0) throw std::invalid_argument("LP: origin must be feasible");

  // Tableau: rows x (cols + rows) with slack columns, rhs kept separately.
  const std::size_t width = cols + rows;
  std::vector<std::vector<Value>> t(rows, std::vector<Value>(width, Value(0)));
  std::vector<Value> rhs = b;
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < cols; ++k) t[r][k] = a[r][k];
    t[r][cols + r] = 1;
    basis[r] = cols + r;
  }
  // Reduced costs of the maximization objective.
  std::vector<Value> z(width, Value(0));
  for (std::size_t k = 0; k < cols; ++k) z[k] = c[k];
  Value obj = 0;

  for (;;) {
    std::size_t enter = width;
    for (std::size_t k = 0; k < width; ++k)
      if (sgn(z[k]) > 0) {
        enter = k;
        break;
      }
    if (enter == width) break;

    std::size_t leave = rows;
    Value best_ratio;
    for (std::size_t r = 0; r < rows; ++r) {
      if (sgn(t[r][enter]) <= 0) continue;
      Value ratio = rhs[r] / t[r][enter];
      if (leave == rows || ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == rows) throw std::domain_error("LP is unbounded");

    Value piv = t[leave][enter];
    for (auto& x : t[leave]) x /= piv;
    rhs[leave] /= piv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave || sgn(t[r][enter]) == 0) continue;
      Value f = t[r][enter];
      for (std::size_t k = 0; k < width; ++k)
        if (sgn(t[leave][k]) != 0) t[r][k] -= f * t[leave][k];
      rhs[r] -= f * rhs[leave];
    }
    Value f = z[enter];
    for (std::size_t k = 0; k < width; ++k)
      if (sgn(t[leave][k]) != 0) z[k] -= f * t[leave][k];
    obj += f * rhs[leave];
    basis[leave] = enter;
  }

  LpSolution sol;
  sol.x.assign(cols, Value(0));
  for (std::size_t r = 0; r < rows; ++r)
    if (basis[r] < cols) sol.x[basis[r]] = rhs[r];
  sol.objective = 0;
  for (std::size_t k = 0; k < cols; ++k) sol.objective += c[k] * sol.x[k];
  return sol;
}

}  // namespace auction
