// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>

#include "nidt/approx.hpp"
#include "nidt/sderiv.hpp"

namespace nidt {

// A finite set of derivation positions proposed as the support of a derivation
// typing a normal form.
struct SupportCandidate {
  Term term;
  std::set<Position> A;
};

// Throws NotNormalForm or InvalidCandidate (empty, not prefix closed, outside the
// term, not closed under 0/1 extension, or a letter unfit for the node).
void validate_candidate(const SupportCandidate& c);

enum class ClevKind { Unconstrained, Partial, NonZero };
std::string to_string(ClevKind k);

struct Clev {
  ClevKind kind = ClevKind::Unconstrained;
  std::size_t level = 0;
  Position anchor;  // the unconstrained position related to a
};

using Membership = std::function<bool(const Position&)>;
Clev clev(const Membership& in_A, const Position& a);
Clev clev(const std::set<Position>& A, const Position& a);

// Types at unconstrained positions; missing entries mean the type variable o.
using Assignment = std::map<Position, SType>;
using TrackPolicy = std::function<Track(const Position&)>;

// 2 + shortlex rank among the variable positions of A.
TrackPolicy shortlex_policy(const SupportCandidate& c);

// Variable positions of the full support (argument track 2), indexed in shortlex order.
class FullSupportIndex {
 public:
  explicit FullSupportIndex(Term t);
  Track track_of(const Position& p);       // 2 + shortlex rank
  std::optional<Position> position_of(Track k);
  bool contains(const Position& a) const;  // a in the full support

 private:
  void grow();
  Term t_;
  std::vector<Position> vars_;  // shortlex order, complete up to length done_
  std::vector<std::pair<NodeId, Position>> frontier_;
  std::size_t done_ = 0;
  bool exhausted_ = false;
};

// The natural extension of (A, assignment) with axiom tracks from the policy.
SDerivation natural_extension(const SupportCandidate& c, const Assignment& assign, const TrackPolicy& policy);
// T(a) for every a in A, computed from Call(a) by substitution.
std::map<Position, SType> natural_types(const SupportCandidate& c, const Assignment& assign, const TrackPolicy& policy);

// Natural extension over the full support with o at every unconstrained position.
struct NFGenerator {
  Term term;
  std::shared_ptr<FullSupportIndex> index;
  std::size_t max_rank = 12;
};
NFGenerator unforgetful_nf_typing(const Term& t);  // throws NotNormalForm

std::set<Position> rank_support(const NFGenerator& g, std::size_t n);  // A_n
SDerivation rank_truncate(const NFGenerator& g, std::size_t n);       // throws InvalidCandidate
std::size_t called_rank(const NFGenerator& g, const Biposition& p);
RankFamily nf_family(const NFGenerator& g);

// Unforgetfulness of the generator's (possibly infinite) conclusion, decided by
// a least fixpoint over the term graph.
bool generator_unforgetful(const Term& t);

}  // namespace nidt
