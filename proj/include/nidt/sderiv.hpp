// SPDX-License-Identifier: MIT
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nidt/r0.hpp"
#include "nidt/stype.hpp"

namespace nidt {

struct SJudgment {
  Rule rule = Rule::Ax;
  SType type;
  SContext ctx;
  Track track = 0;  // axiom track, Ax only
};

// Flat tree keyed by derivation position: 0 abstraction body, 1 left premise,
// k >= 2 argument track. The subject of node a is t at collapse(a).
struct SDerivation {
  Term term;
  std::map<Position, SJudgment> nodes;
};

struct AxiomSpec {
  SType type;
  Track track = 0;
};

// Builds the derivation with the given support: Abs and App types and every
// context are computed from the axioms. Throws TrackConflict or RuleMismatch.
SDerivation derive_s(const Term& t, const std::set<Position>& support, const std::map<Position, AxiomSpec>& axioms);

// Recomputes every context from the axioms, keeping types.
void recompute_contexts(SDerivation& d);

CheckResult check_s(const SDerivation& d, const Term& t);
inline CheckResult check_s(const SDerivation& d) { return check_s(d, d.term); }
// Finite prefix of a larger derivation: nodes in `open` may miss premises, so
// only their link to the parent is checked.
CheckResult check_s_prefix(const SDerivation& d, const Term& t, const std::set<Position>& open);

std::size_t size(const SDerivation& d);
std::set<Position> support(const SDerivation& d);

struct SConclusion {
  SContext ctx;
  SType type;
};
SConclusion conclusion(const SDerivation& d);
std::string to_string(const SConclusion& c);
bool is_unforgetful_s(const SConclusion& c);

// Right (a, c) or left (a, x, k.c).
struct Biposition {
  bool left = false;
  Position a;
  VarKey x;
  Position c;

  bool operator==(const Biposition& o) const {
    return left == o.left && a == o.a && c == o.c && (!left || x == o.x);
  }
  bool operator<(const Biposition& o) const;
};
Biposition right_bip(Position a, Position c);
Biposition left_bip(Position a, VarKey x, Position c);
std::string to_string(const Biposition& p);  // "(a, c)" or "(a, x, c)"
Biposition parse_biposition(const std::string& text);

using Bisupport = std::map<Biposition, std::string>;  // symbol: "->" or a type variable

Bisupport bisupport(const SDerivation& d);
std::optional<std::string> bisupport_lookup(const SDerivation& d, const Biposition& p);

bool is_quantitative(const SDerivation& d);

// Explicit context tracks (a, x, k) with no axiom above a on track k; cofinite tails are skipped.
struct Unanchored {
  Position a;
  VarKey x;
  Track k = 0;
};
std::vector<Unanchored> unanchored_tracks(const SDerivation& d);

// Axioms above a typing x (free at a).
std::vector<Position> axioms_above(const SDerivation& d, const Position& a, const VarKey& x);
// Throws NotAnchored.
Position axiom_position(const SDerivation& d, const Position& a, const VarKey& x, Track k);

R0Derivation collapse_s_to_multiset(const SDerivation& d);
// Tracks per binder: axioms sorted on (canonical type order, preorder) take 2, 3, ...
SDerivation lift_r0_to_s(const R0Derivation& d);

// Rebuilds the derivation determined by a labelled bisupport. Throws RuleMismatch.
SDerivation from_bisupport(const Term& t, const Bisupport& b);

// Order-independent digest of a derivation, for determinism checks.
std::string digest(const SDerivation& d);

}  // namespace nidt
