// SPDX-License-Identifier: MIT
#include "nidt/position.hpp"

#include <algorithm>
#include <charconv>

#include "nidt/errors.hpp"

namespace nidt {

std::size_t applicative_depth(const Position& p) {
  return static_cast<std::size_t>(std::count_if(p.begin(), p.end(), [](Letter l) { return l >= 2; }));
}

Position collapse(const Position& p) {
  Position out(p);
  for (auto& l : out) l = std::min<Letter>(l, 2);
  return out;
}

std::size_t rank(const Position& p) {
  Letter m = 0;
  for (Letter l : p) m = std::max(m, l);
  return std::max<std::size_t>(applicative_depth(p), static_cast<std::size_t>(m));
}

bool is_prefix(const Position& a, const Position& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

bool is_strict_prefix(const Position& a, const Position& b) {
  return a.size() < b.size() && is_prefix(a, b);
}

Position concat(const Position& a, const Position& b) {
  Position out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Position concat(const Position& a, std::initializer_list<Letter> tail) {
  Position out(a);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

Position suffix_after(const Position& whole, std::size_t n) {
  return Position(whole.begin() + static_cast<std::ptrdiff_t>(std::min(n, whole.size())), whole.end());
}

bool shortlex_less(const Position& a, const Position& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::string to_string(const Position& p) {
  if (p.empty()) return "e";
  bool compact = std::all_of(p.begin(), p.end(), [](Letter l) { return l < 10; });
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!compact && i > 0) out += '.';
    out += std::to_string(p[i]);
  }
  return out;
}

Position parse_position(std::string_view text) {
  Position out;
  if (text.empty() || text == "e" || text == "ε") return out;
  bool dotted = text.find('.') != std::string_view::npos;
  if (!dotted) {
    for (char c : text) {
      if (c < '0' || c > '9') fail("SyntaxError", "bad position '" + std::string(text) + "'");
      out.push_back(static_cast<Letter>(c - '0'));
    }
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('.', start);
    if (end == std::string_view::npos) end = text.size();
    auto part = text.substr(start, end - start);
    Letter v = 0;
    auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || res.ec != std::errc{} || res.ptr != part.data() + part.size())
      fail("SyntaxError", "bad position '" + std::string(text) + "'");
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

}  // namespace nidt
