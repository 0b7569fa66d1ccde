// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>

#include "nidt/sderiv.hpp"

namespace nidt {

enum class Undefined { None, RedexVariable, RedexRoot, RedexAbstraction, PhantomTrack };
std::string to_string(Undefined u);

struct Residual {
  std::optional<Position> pos;  // empty when undefined
  Undefined why = Undefined::None;
  std::string trace;            // which case of the map applied
};

// Res_b(alpha) for a redex at term position b.
Residual residual_position(const SDerivation& d, const Position& b, const Position& alpha);

// Subject reduction at b. Throws InvalidRedex.
SDerivation reduce_s(const SDerivation& d, const Position& b);

// Right bipositions only. nullopt when undefined.
std::optional<Biposition> residual_biposition(const SDerivation& d, const Position& b, const Biposition& p);
// Total on right bipositions of quantitative derivations; (a.1, e) maps to (a, e).
std::optional<Biposition> quasi_residual(const SDerivation& d, const Position& b, const Biposition& p);

// Track of an axiom created at the given derivation position.
using ExpansionPolicy = std::function<Track(const Position&)>;
// Deterministic hash into [2, 2^31).
ExpansionPolicy hash_policy();
// Tracks read from a reference derivation typing the expanded term.
ExpansionPolicy reference_policy(const SDerivation& ref);

// Uniform expansion of d (typing t') to t, where t ->_b t'.
// Throws SubjectMismatch, or TrackConflict on a policy collision.
SDerivation expand_s(const SDerivation& d, const Position& b, const Term& t, const ExpansionPolicy& policy);

// Least superset of B inside bisupp(d) closed under node and type-prefix
// requirements, asc, and the equations linking premises to conclusions.
std::set<Biposition> equinecessary_closure(const SDerivation& d, const std::set<Biposition>& B);

}  // namespace nidt
