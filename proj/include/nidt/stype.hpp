// SPDX-License-Identifier: MIT
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nidt/position.hpp"
#include "nidt/r0.hpp"
#include "nidt/term.hpp"

namespace nidt {

struct STypeNode;
using SType = std::shared_ptr<const STypeNode>;

// Finite track-indexed family, optionally extended by one cofinite tail: every
// track k >= tail_from (and above all explicit entries) maps to `tail`.
struct SeqType {
  std::vector<std::pair<Track, SType>> entries;  // strictly increasing tracks
  std::optional<Track> tail_from;
  SType tail;

  bool empty() const { return entries.empty() && !tail_from; }
};

// Var | Arrow(dom, cod) | Mu(body) | Rec(i), Rec being a de Bruijn reference to
// the i-th enclosing Mu. Mu types only describe regular fixtures.
enum class SKind { Var, Arrow, Mu, Rec };

struct STypeNode {
  SKind kind = SKind::Var;
  std::string name;
  SeqType dom;
  SType cod;
  std::uint32_t rec = 0;
  SType body;
};

SType s_var(std::string name);
SType s_arrow(SeqType dom, SType cod);
SType s_mu(SType body);
SType s_rec(std::uint32_t index);

// Sorts entries by track; throws TrackConflict on a repeated track.
SeqType make_seq(std::vector<std::pair<Track, SType>> entries);
SeqType make_cofinite(std::vector<std::pair<Track, SType>> entries, Track from, SType tail);

// Disjoint union; throws TrackConflict naming the first shared track.
SeqType seq_union(const SeqType& a, const SeqType& b);
// Explicit tracks; for a cofinite family only the entries below the tail.
std::vector<Track> tracks(const SeqType& s);
std::optional<SType> seq_at(const SeqType& s, Track k);

bool is_finite(const SType& t);
bool is_finite(const SeqType& s);

// Throws InfiniteSupport for cofinite or recursive types.
std::set<Position> supp(const SType& t);
std::set<Position> supp(const SeqType& s);  // positions k.c

// "->" for an arrow, the variable name for a type variable, nullopt outside the support.
std::optional<std::string> label_at(const SType& t, const Position& c);
std::optional<std::string> label_at(const SeqType& s, const Position& kc);

bool equal(const SType& a, const SType& b);
bool equal(const SeqType& a, const SeqType& b);
int compare(const SType& a, const SType& b);

std::string to_string(const SType& t);
std::string to_string(const SeqType& s);
SType parse_s_type(std::string_view text);

// Forgets tracks. Throws InfiniteSupport on infinite types.
R0Type collapse_type(const SType& t);
Multiset collapse_seq(const SeqType& s);
// Canonical lift: domain elements, already in canonical order, take tracks 2, 3, ...
SType lift_type(const R0Type& t);

bool s_empty_occurs_positively(const SType& t);
bool s_empty_occurs_negatively(const SType& t);

using SContext = std::map<VarKey, SeqType>;
SContext ctx_union(const SContext& a, const SContext& b);  // throws TrackConflict
bool equal(const SContext& a, const SContext& b);
std::string to_string(const SContext& c);

}  // namespace nidt
