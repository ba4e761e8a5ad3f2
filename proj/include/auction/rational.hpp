#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace auction {

// Exact money. Bids and valuation outputs are nonnegative; utilities may not be.
using Value = mpq_class;

// Accepts "p", "p/q", "-p/q" and plain integers. Throws std::invalid_argument.
Value parse_rational(std::string_view text);

// Canonical form: "p" for integers, "p/q" otherwise.
std::string to_string(const Value& v);

// Rounded to double, for tables and CSV only.
double to_double(const Value& v);

Value harmonic(std::size_t n);

Value power(const Value& base, std::int64_t exponent);

// A ratio that may be unbounded (denominator zero).
struct Ratio {
  bool unbounded = false;
  Value value;

  static Ratio infinite() { return {true, 0}; }
  static Ratio of(const Value& num, const Value& den);

  bool operator==(const Ratio& o) const {
    return unbounded == o.unbounded && (unbounded || value == o.value);
  }
};

std::string to_string(const Ratio& r);
Ratio parse_ratio(std::string_view text);

}  // namespace auction
