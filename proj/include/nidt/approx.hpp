// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "nidt/reduction.hpp"
#include "nidt/sdynamics.hpp"

namespace nidt {

// Bisupport inclusion with agreeing symbols. Throws SubjectMismatch.
bool leq_approx(const SDerivation& d1, const SDerivation& d2);

// Labelled bisupport union / intersection. Throw NotDirected naming a witness pair.
SDerivation join(const std::vector<SDerivation>& ds);
SDerivation meet(const std::vector<SDerivation>& ds);

// Rank-indexed family of finite derivations of one term. `member` may throw
// InvalidCandidate for ranks that do not give a derivation. `called_rank` is
// set for natural-extension families.
struct RankFamily {
  std::function<SDerivation(std::size_t)> member;
  std::function<std::size_t(const Biposition&)> called_rank;
  std::size_t max_rank = 16;
};

struct Approximant {
  SDerivation derivation;
  std::size_t rank = 0;
};

// Least member containing the equinecessary closure of B. Throws NotContained.
Approximant find_finite_approximant(const RankFamily& family, const std::set<Biposition>& B);

// Expansion of one finite derivation typing the last term of the path back to
// its first term. Throws PathTooShort.
struct MemberExpansion {
  SDerivation derivation;
  std::size_t n = 0;  // index of the substituted term t_N
};
MemberExpansion expand_member(const SDerivation& d, const Path& path, const ExpansionPolicy& policy = hash_policy());
RankFamily expand_infinitary(const RankFamily& family, const Path& path);

// Nodes with applicative depth <= level of the derivation reduced along the
// path, taken after the last step at depth <= level. Throws NotStable.
std::map<Position, SJudgment> infinitary_reduce_family(const SDerivation& d, const Path& path, std::size_t level);

// Finite S-derivations of t with at most max_size judgments. Collapse and the
// canonical lift preserve size and move between S and R0 derivations of the same
// term, so the R0 search decides this.
bool s_derivation_exists(const Term& t, std::size_t max_size);

}  // namespace nidt
