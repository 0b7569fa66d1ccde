// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nidt {

using Letter = std::uint64_t;
using Track = std::uint64_t;

// A word over the naturals. Terms use {0,1,2}; derivations use 0, 1 and tracks >= 2.
using Position = std::vector<Letter>;

std::size_t applicative_depth(const Position& p);
Position collapse(const Position& p);
std::size_t rank(const Position& p);

bool is_prefix(const Position& a, const Position& b);
bool is_strict_prefix(const Position& a, const Position& b);
Position concat(const Position& a, const Position& b);
Position concat(const Position& a, std::initializer_list<Letter> tail);
Position suffix_after(const Position& whole, std::size_t n);

// Length first, then lexicographic.
bool shortlex_less(const Position& a, const Position& b);
struct ShortlexLess {
  bool operator()(const Position& a, const Position& b) const { return shortlex_less(a, b); }
};

// "e" for the empty word; compact digits when all letters are < 10, dotted otherwise.
std::string to_string(const Position& p);
Position parse_position(std::string_view text);

}  // namespace nidt
