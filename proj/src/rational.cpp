#include "auction/rational.hpp"

#include <stdexcept>

namespace auction {

Value parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return std::invalid_argument("not a rational: \"" + s + "\""); };
  if (s.empty()) throw bad();
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  bool seen_slash = false;
  std::size_t digits_before = 0, digits_after = 0;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '/') {
      if (seen_slash) throw bad();
      seen_slash = true;
    } else if (c >= '0' && c <= '9') {
      (seen_slash ? digits_after : digits_before)++;
    } else {
      throw bad();
    }
  }
  if (digits_before == 0 || (seen_slash && digits_after == 0)) throw bad();
  std::string body = s[0] == '+' ? s.substr(1) : s;
  Value v;
  if (v.set_str(body, 10) != 0) throw bad();
  if (v.get_den() == 0) throw bad();
  v.canonicalize();
  return v;
}

std::string to_string(const Value& v) { return v.get_str(10); }

double to_double(const Value& v) { return v.get_d(); }

Value harmonic(std::size_t n) {
  Value h = 0;
  for (std::size_t i = 1; i <= n; ++i) h += Value(1, i);
  return h;
}

Value power(const Value& base, std::int64_t exponent) {
  Value result = 1;
  Value b = exponent < 0 ? Value(1 / base) : base;
  for (std::int64_t e = exponent < 0 ? -exponent : exponent; e > 0; --e) result *= b;
  return result;
}

Ratio Ratio::of(const Value& num, const Value& den) {
  if (den == 0) return infinite();
  return {false, num / den};
}

std::string to_string(const Ratio& r) { return r.unbounded ? "unbounded" : to_string(r.value); }

Ratio parse_ratio(std::string_view text) {
  if (text == "unbounded") return Ratio::infinite();
  return {false, parse_rational(text)};
}

}  // namespace auction
