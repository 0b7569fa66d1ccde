// SPDX-License-Identifier: MIT
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nidt/term.hpp"

namespace nidt {

// t ->_b t'. Throws NotARedex or PositionOutOfSupport.
Term reduce_at(const Term& t, const Position& b);

// Decomposition lambda x1..xp. h t1..tq of a head normal form.
struct HeadNormal {
  std::size_t p = 0;
  bool head_bound = false;
  std::uint32_t head_index = 0;  // binder distance from the head, when bound
  std::string head_name;         // free name, or binder hint when bound
  std::size_t q = 0;
};

// Position of the head redex, or the HNF decomposition. Throws Headless.
std::variant<Position, HeadNormal> head_redex(const Term& t);
std::variant<Term, HeadNormal> head_step(const Term& t);

// Least applicative depth of a redex, nullopt for a normal form.
std::optional<std::size_t> adr(const Term& t);
bool is_normal_form(const Term& t);

// Outermost redexes at applicative depth d, in lexicographic order.
std::vector<Position> redexes_at_depth(const Term& t, std::size_t d);

// Contracts every outermost redex at depth adr(t). Throws AlreadyNormal.
Term hh_parallel_step(const Term& t);

// Lexicographically least redex position; nullopt for a normal form.
// Throws StrategyUndefined when the descent cycles.
std::optional<Position> leftmost_redex(const Term& t);

enum class Strategy { Head, Leftmost, HH };
enum class PathStatus { NormalForm, HeadNormalForm, Stalled, Productive, FuelExhausted, StrategyUndefined };

std::string to_string(Strategy s);
std::string to_string(PathStatus s);
Strategy parse_strategy(const std::string& s);

struct Step {
  std::vector<Position> positions;
  std::size_t depth = 0;  // applicative depth of the contracted redexes
};

struct Path {
  std::vector<Term> terms;  // terms.size() == steps.size() + 1
  std::vector<Step> steps;
  PathStatus status = PathStatus::FuelExhausted;
};

Path run_path(const Term& t, Strategy strategy, std::size_t fuel);

struct BohmPrefix {
  enum class Kind { Var, Abs, App, Bottom, Unexplored };
  Kind kind = Kind::Unexplored;
  std::string name;    // variable name, or binder name for Abs
  bool loop = false;   // Bottom proved by a repeated state
  std::vector<BohmPrefix> children;  // Abs: {body}; App: {left, right}

  bool operator==(const BohmPrefix& o) const {
    return kind == o.kind && name == o.name && loop == o.loop && children == o.children;
  }
};

// Final term of the path restricted to ad <= d, Unexplored at depth d+1;
// nullopt (NotStable) when the final term still has a redex at depth <= d.
std::optional<BohmPrefix> limit_prefix(const Path& path, std::size_t d);

// Nodes at applicative depth < d, Unexplored at depth d. Throws Non001Term.
BohmPrefix bohm_prefix(const Term& t, std::size_t d, std::size_t fuel);

// One node per line, two spaces of indentation per level.
std::string to_text(const BohmPrefix& b);
// Term-like rendering: "?" for Unexplored, "bot" / "bot?" for loop / unknown Bottom.
std::string to_compact(const BohmPrefix& b);
// Positions of non-Unexplored nodes.
std::vector<Position> prefix_positions(const BohmPrefix& b);

}  // namespace nidt
