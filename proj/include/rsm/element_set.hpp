#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace rsm {

/// A subset of the ground set {0, ..., n-1}. The bitset size is always the
/// ground-set size n, never the subset cardinality.
using ElementSet = boost::dynamic_bitset<std::uint64_t>;

inline ElementSet make_set(std::size_t n, std::initializer_list<std::size_t> elems) {
  ElementSet s(n);
  for (std::size_t e : elems) s.set(e);
  return s;
}

inline ElementSet make_set(std::size_t n, const std::vector<int>& elems) {
  ElementSet s(n);
  for (int e : elems) s.set(static_cast<std::size_t>(e));
  return s;
}

inline ElementSet empty_set(std::size_t n) { return ElementSet(n); }

inline ElementSet full_set(std::size_t n) {
  ElementSet s(n);
  s.set();
  return s;
}

/// Low 64 bits of `mask` become elements; only valid for n <= 64. Used by
/// exhaustive small-n loops.
inline ElementSet set_from_mask(std::size_t n, std::uint64_t mask) {
  ElementSet s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (mask >> i & 1u) s.set(i);
  return s;
}

inline std::vector<int> set_to_indices(const ElementSet& s) {
  std::vector<int> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i))
    out.push_back(static_cast<int>(i));
  return out;
}

/// Lexicographic order on ascending index lists ({0} < {0,1} < {1}); the
/// brute-force oracle uses it for reproducible tie-breaking.
inline bool lex_less(const ElementSet& a, const ElementSet& b) {
  auto i = a.find_first();
  auto j = b.find_first();
  while (i != ElementSet::npos && j != ElementSet::npos) {
    if (i != j) return i < j;
    i = a.find_next(i);
    j = b.find_next(j);
  }
  return i == ElementSet::npos && j != ElementSet::npos;
}

inline std::string format_set(const ElementSet& s) {
  std::ostringstream oss;
  oss << '{';
  bool first = true;
  for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i)) {
    if (!first) oss << ' ';
    oss << i;
    first = false;
  }
  oss << '}';
  return oss.str();
}

}  // namespace rsm
