#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace auction {

// Bit j is item j (0-based internally, printed 1-based).
using ItemSet = boost::dynamic_bitset<std::uint64_t>;

ItemSet empty_set(std::size_t m);
ItemSet full_set(std::size_t m);
ItemSet make_set(std::size_t m, std::initializer_list<std::size_t> items);
ItemSet make_set(std::size_t m, const std::vector<std::size_t>& items);
ItemSet from_mask(std::uint64_t mask, std::size_t m);
std::uint64_t to_mask(const ItemSet& s);  // requires s.size() <= 64

std::vector<std::size_t> members(const ItemSet& s);

// Compares as binary numbers, item 1 least significant. This is the canonical
// order used to break ties between sets.
bool mask_less(const ItemSet& a, const ItemSet& b);

// "{1,3}" with 1-based item numbers.
std::string format_items(const ItemSet& s);

}  // namespace auction
