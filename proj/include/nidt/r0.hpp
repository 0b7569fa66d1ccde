// SPDX-License-Identifier: MIT
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nidt/reduction.hpp"
#include "nidt/term.hpp"

namespace nidt {

struct R0TypeNode;
using R0Type = std::shared_ptr<const R0TypeNode>;
using Multiset = std::vector<R0Type>;  // kept sorted by compare()

// o | [s1, ..., sn] -> t
struct R0TypeNode {
  bool is_var = true;
  std::string name;
  Multiset dom;
  R0Type cod;
};

R0Type r0_var(std::string name);
R0Type r0_arrow(Multiset dom, R0Type cod);  // sorts dom

// Total order: variables before arrows; arrows with larger domains first, then
// domains elementwise, then codomains.
int compare(const R0Type& a, const R0Type& b);
bool equal(const R0Type& a, const R0Type& b);
void sort_multiset(Multiset& m);
bool equal(const Multiset& a, const Multiset& b);

std::string to_string(const R0Type& t);
std::string to_string(const Multiset& m);
R0Type parse_r0_type(std::string_view text);

using R0Context = std::map<VarKey, Multiset>;
R0Context context_sum(const R0Context& a, const R0Context& b);
bool equal(const R0Context& a, const R0Context& b);
std::string to_string(const R0Context& c);

enum class Rule { Ax, Abs, App };
std::string to_string(Rule r);
Rule parse_rule(const std::string& s);

struct R0Node;
using R0NodePtr = std::shared_ptr<const R0Node>;

// Abs: kids = {body}; App: kids = {left, arg_1, ..., arg_n} with args sorted by type.
struct R0Node {
  Rule rule = Rule::Ax;
  Position pos;  // subject position in the shared term
  R0Type type;
  R0Context ctx;
  std::vector<R0NodePtr> kids;
};

struct R0Derivation {
  Term term;
  R0NodePtr root;
};

// Rule-directed constructors: contexts and derived types are computed.
R0NodePtr r0_ax(const Term& t, Position pos, R0Type type);
R0NodePtr r0_abs(const Term& t, Position pos, R0NodePtr body);
R0NodePtr r0_app(const Term& t, Position pos, R0NodePtr left, std::vector<R0NodePtr> args);
// Same tree, every context and derived type recomputed against t.
R0NodePtr r0_rebuild(const Term& t, const R0NodePtr& n);

struct CheckResult {
  bool ok = true;
  std::vector<std::string> diagnostics;
};

CheckResult check_r0(const R0Derivation& d, const Term& t);
inline CheckResult check_r0(const R0Derivation& d) { return check_r0(d, d.term); }

std::size_t size(const R0Derivation& d);
std::size_t size(const R0NodePtr& n);
std::set<Position> typed_positions(const R0Derivation& d);

struct R0Judgment {
  R0Context ctx;
  R0Type type;
};
R0Judgment conclusion(const R0Derivation& d);
std::string to_string(const R0Judgment& j);

// Throws NotHNF.
R0Derivation type_hnf(const Term& t, const std::string& o = "o");

// Leftmost bound-variable axiom gets the first argument of equal type; `perm`
// reorders the argument list first. Throws InvalidStep.
R0Derivation subject_reduce_r0(const R0Derivation& d, const Position& b,
                               const std::optional<std::vector<std::size_t>>& perm = std::nullopt);
R0Derivation subject_expand_r0(const R0Derivation& d, const Position& b, const Term& t);

// Throws SubjectMismatch naming the first (shortlex) disagreeing typed position.
R0Derivation subject_substitute(const R0Derivation& d, const Term& u);

bool is_unforgetful_r0(const R0Judgment& j);
// [] occurs positively / negatively in a type.
bool empty_occurs_positively(const R0Type& t);
bool empty_occurs_negatively(const R0Type& t);

// Pi'_n typing f^inf with f:[[o]->o]_{n-1} + [[]->o].
R0Derivation build_pi_prime_n(std::size_t n);
R0Context gamma_n(std::size_t n);

// Expands d along the recorded path back to path.terms.front(). Throws PathTooShort.
struct InfinitaryExpansion {
  R0Derivation derivation;
  std::size_t n = 0;  // index of the substituted term t_N
};
InfinitaryExpansion infinitary_expand_r0(const R0Derivation& d, const Path& path);

// Exhaustive search: does some R0 derivation of t with at most max_size judgments exist?
bool r0_derivation_exists(const Term& t, std::size_t max_size);

// Head reduction within fuel, type_hnf on the result, then expansion back to t.
std::optional<R0Derivation> synthesize_r0(const Term& t, std::size_t fuel);

}  // namespace nidt
