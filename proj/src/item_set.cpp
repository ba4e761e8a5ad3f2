#include "auction/item_set.hpp"

#include <stdexcept>

namespace auction {

ItemSet empty_set(std::size_t m) { return ItemSet(m); }

ItemSet full_set(std::size_t m) {
  ItemSet s(m);
  s.set();
  return s;
}

ItemSet make_set(std::size_t m, const std::vector<std::size_t>& items) {
  ItemSet s(m);
  for (std::size_t j : items) {
    if (j >= m) throw std::out_of_range("item index out of range");
    s.set(j);
  }
  return s;
}

ItemSet make_set(std::size_t m, std::initializer_list<std::size_t> items) {
  return make_set(m, std::vector<std::size_t>(items));
}

ItemSet from_mask(std::uint64_t mask, std::size_t m) {
  ItemSet s(m);
  for (std::size_t j = 0; j < m && j < 64; ++j)
    if ((mask >> j) & 1U) s.set(j);
  return s;
}

std::uint64_t to_mask(const ItemSet& s) {
  if (s.size() > 64) throw std::length_error("item set wider than 64 bits");
  std::uint64_t mask = 0;
  for (auto j = s.find_first(); j != ItemSet::npos; j = s.find_next(j)) mask |= std::uint64_t{1} << j;
  return mask;
}

std::vector<std::size_t> members(const ItemSet& s) {
  std::vector<std::size_t> out;
  out.reserve(s.count());
  for (auto j = s.find_first(); j != ItemSet::npos; j = s.find_next(j)) out.push_back(j);
  return out;
}

bool mask_less(const ItemSet& a, const ItemSet& b) {
  std::size_t width = std::max(a.size(), b.size());
  for (std::size_t k = width; k-- > 0;) {
    bool x = k < a.size() && a.test(k);
    bool y = k < b.size() && b.test(k);
    if (x != y) return y;
  }
  return false;
}

std::string format_items(const ItemSet& s) {
  std::string out = "{";
  bool first = true;
  for (auto j = s.find_first(); j != ItemSet::npos; j = s.find_next(j)) {
    if (!first) out += ",";
    out += std::to_string(j + 1);
    first = false;
  }
  return out + "}";
}

}  // namespace auction
