// SPDX-License-Identifier: MIT
#include "nidt/sderiv.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <tuple>

#include "nidt/errors.hpp"

namespace nidt {

namespace {

std::map<Position, std::vector<Letter>> children_of(const std::set<Position>& supp) {
  std::map<Position, std::vector<Letter>> kids;
  for (const auto& p : supp) {
    if (p.empty()) continue;
    kids[Position(p.begin(), p.end() - 1)].push_back(p.back());
  }
  return kids;
}

VarKey binder_key_at(const Term& t, const Position& a) {
  Position p = collapse(a);
  auto id = t.walk(p);
  return bound_key(id ? t.node(*id).name : std::string(), p);
}

Position child(const Position& a, Letter l) { return concat(a, {l}); }

// x is free in the subject at derivation position a.
bool free_at(const VarKey& x, const Position& a) { return !x.bound || x.binder.size() < a.size(); }

SContext remove_key(SContext c, const VarKey& k) {
  c.erase(k);
  return c;
}

std::string app_union(const SContext& acc, const SContext& add, const Position& a, SContext& out) {
  out = acc;
  for (const auto& [k, s] : add) {
    auto it = out.find(k);
    if (it == out.end()) {
      out[k] = s;
      continue;
    }
    for (Track tr : tracks(s))
      if (seq_at(it->second, tr)) return "TrackConflict at " + to_string(a) + ": " + to_string(k) + " track " + std::to_string(tr);
    try {
      it->second = seq_union(it->second, s);
    } catch (const DomainError& e) {
      return "TrackConflict at " + to_string(a) + ": " + to_string(k) + " " + e.what();
    }
  }
  return {};
}

}  // namespace

SDerivation derive_s(const Term& t, const std::set<Position>& supp, const std::map<Position, AxiomSpec>& axioms) {
  SDerivation d;
  d.term = t;
  auto kids = children_of(supp);
  for (auto it = supp.rbegin(); it != supp.rend(); ++it) {
    const Position& a = *it;
    if (!a.empty() && !supp.count(Position(a.begin(), a.end() - 1)))
      fail("RuleMismatch", to_string(a) + ": parent missing");
    auto id = t.walk(collapse(a));
    if (!id) fail("RuleMismatch", to_string(a) + ": outside the subject");
    const auto& tn = t.node(*id);
    SJudgment j;
    if (tn.kind == NodeKind::Bound || tn.kind == NodeKind::Free) {
      auto ax = axioms.find(a);
      if (ax == axioms.end()) fail("RuleMismatch", to_string(a) + ": axiom without a type");
      j.rule = Rule::Ax;
      j.type = ax->second.type;
      j.track = ax->second.track;
      j.ctx[*var_key_at(t, collapse(a))] = make_seq({{j.track, j.type}});
    } else if (tn.kind == NodeKind::Abs) {
      auto c = d.nodes.find(child(a, 0));
      if (c == d.nodes.end()) fail("RuleMismatch", to_string(a) + ": abstraction without body");
      j.rule = Rule::Abs;
      VarKey x = binder_key_at(t, a);
      auto xs = c->second.ctx.find(x);
      SeqType dom = xs == c->second.ctx.end() ? SeqType{} : xs->second;
      j.type = s_arrow(dom, c->second.type);
      j.ctx = remove_key(c->second.ctx, x);
    } else {
      auto l = d.nodes.find(child(a, 1));
      if (l == d.nodes.end()) fail("RuleMismatch", to_string(a) + ": application without left premise");
      if (l->second.type->kind != SKind::Arrow) fail("RuleMismatch", to_string(a) + ": left premise is not an arrow");
      j.rule = Rule::App;
      j.type = l->second.type->cod;
      j.ctx = l->second.ctx;
      for (Letter k : kids[a]) {
        if (k < 2) continue;
        SContext out;
        std::string err = app_union(j.ctx, d.nodes.at(child(a, k)).ctx, a, out);
        if (!err.empty()) fail("TrackConflict", err);
        j.ctx = std::move(out);
      }
    }
    d.nodes[a] = std::move(j);
  }
  return d;
}

void recompute_contexts(SDerivation& d) {
  auto kids = children_of(support(d));
  for (auto it = d.nodes.rbegin(); it != d.nodes.rend(); ++it) {
    const Position& a = it->first;
    SJudgment& j = it->second;
    j.ctx.clear();
    if (j.rule == Rule::Ax) {
      j.ctx[*var_key_at(d.term, collapse(a))] = make_seq({{j.track, j.type}});
    } else if (j.rule == Rule::Abs) {
      j.ctx = remove_key(d.nodes.at(child(a, 0)).ctx, binder_key_at(d.term, a));
    } else {
      j.ctx = d.nodes.at(child(a, 1)).ctx;
      for (Letter k : kids[a]) {
        if (k < 2) continue;
        SContext out;
        std::string err = app_union(j.ctx, d.nodes.at(child(a, k)).ctx, a, out);
        if (!err.empty()) fail("TrackConflict", err);
        j.ctx = std::move(out);
      }
    }
  }
}

CheckResult check_s(const SDerivation& d, const Term& t) { return check_s_prefix(d, t, {}); }

CheckResult check_s_prefix(const SDerivation& d, const Term& t, const std::set<Position>& open) {
  CheckResult r;
  auto diag = [&](const std::string& code, const Position& a, const std::string& what) {
    r.diagnostics.push_back(code + " at " + to_string(a) + ": " + what);
  };
  if (!d.nodes.count({})) {
    r.ok = false;
    r.diagnostics.push_back("RuleMismatch at e: no root judgment");
    return r;
  }
  auto kids = children_of(support(d));
  for (const auto& [a, j] : d.nodes) {
    if (!a.empty()) {
      Position parent(a.begin(), a.end() - 1);
      auto pit = d.nodes.find(parent);
      Letter l = a.back();
      if (pit == d.nodes.end()) {
        diag("RuleMismatch", a, "parent judgment missing");
      } else if ((pit->second.rule == Rule::Abs && l != 0) || (pit->second.rule == Rule::App && l == 0) ||
                 pit->second.rule == Rule::Ax) {
        diag("RuleMismatch", a, "edge letter does not fit the parent rule");
      }
    }
    auto id = t.walk(collapse(a));
    if (!id) {
      diag("RuleMismatch", a, "position outside the subject");
      continue;
    }
    const auto& tn = t.node(*id);
    if (open.count(a)) continue;
    switch (j.rule) {
      case Rule::Ax: {
        if (tn.kind != NodeKind::Bound && tn.kind != NodeKind::Free) {
          diag("RuleMismatch", a, "axiom on a non-variable");
          break;
        }
        SContext want;
        want[*var_key_at(t, collapse(a))] = make_seq({{j.track, j.type}});
        if (j.track < 2 || !equal(j.ctx, want)) diag("RuleMismatch", a, "axiom context must be x:(k.T)");
        break;
      }
      case Rule::Abs: {
        auto c = d.nodes.find(child(a, 0));
        if (tn.kind != NodeKind::Abs || c == d.nodes.end()) {
          diag("RuleMismatch", a, "abstraction rule does not fit");
          break;
        }
        VarKey x = binder_key_at(t, a);
        auto xs = c->second.ctx.find(x);
        SeqType dom = xs == c->second.ctx.end() ? SeqType{} : xs->second;
        if (!equal(j.type, s_arrow(dom, c->second.type))) diag("RuleMismatch", a, "type differs from (C(a0)(x)) -> T(a0)");
        if (!equal(j.ctx, remove_key(c->second.ctx, x))) diag("RuleMismatch", a, "context differs from the body context minus x");
        break;
      }
      case Rule::App: {
        auto l = d.nodes.find(child(a, 1));
        if (tn.kind != NodeKind::App || l == d.nodes.end()) {
          diag("RuleMismatch", a, "application rule does not fit");
          break;
        }
        const SType& lt = l->second.type;
        std::vector<std::pair<Track, SType>> args;
        SContext sum = l->second.ctx;
        bool conflict = false;
        for (Letter k : kids[a]) {
          if (k < 2) continue;
          const auto& aj = d.nodes.at(child(a, k));
          args.emplace_back(k, aj.type);
          SContext out;
          std::string err = app_union(sum, aj.ctx, a, out);
          if (!err.empty()) {
            r.diagnostics.push_back(err);
            conflict = true;
            break;
          }
          sum = std::move(out);
        }
        if (lt->kind != SKind::Arrow || !equal(lt->dom, make_seq(args)) || !equal(lt->cod, j.type))
          diag("RuleMismatch", a, "left premise type does not match the argument judgments");
        if (!conflict && !equal(j.ctx, sum)) diag("RuleMismatch", a, "context differs from the disjoint union of the premises");
        break;
      }
    }
  }
  r.ok = r.diagnostics.empty();
  return r;
}

std::size_t size(const SDerivation& d) { return d.nodes.size(); }

std::set<Position> support(const SDerivation& d) {
  std::set<Position> s;
  for (const auto& kv : d.nodes) s.insert(kv.first);
  return s;
}

SConclusion conclusion(const SDerivation& d) {
  const auto& j = d.nodes.at({});
  return {j.ctx, j.type};
}

std::string to_string(const SConclusion& c) {
  std::string s = to_string(c.ctx);
  return (s.empty() ? "|- " : s + " |- ") + to_string(c.type);
}

bool is_unforgetful_s(const SConclusion& c) {
  if (s_empty_occurs_positively(c.type)) return false;
  for (const auto& [k, s] : c.ctx) {
    for (const auto& e : s.entries)
      if (s_empty_occurs_negatively(e.second)) return false;
    if (s.tail_from && s_empty_occurs_negatively(s.tail)) return false;
  }
  return true;
}

bool Biposition::operator<(const Biposition& o) const {
  if (left != o.left) return !left;
  if (a != o.a) return a < o.a;
  if (left && !(x == o.x)) return x < o.x;
  return c < o.c;
}

Biposition right_bip(Position a, Position c) { return Biposition{false, std::move(a), VarKey{}, std::move(c)}; }
Biposition left_bip(Position a, VarKey x, Position c) { return Biposition{true, std::move(a), std::move(x), std::move(c)}; }

std::string to_string(const Biposition& p) {
  if (p.left) return "(" + to_string(p.a) + ", " + to_string(p.x) + ", " + to_string(p.c) + ")";
  return "(" + to_string(p.a) + ", " + to_string(p.c) + ")";
}

Biposition parse_biposition(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') fail("SyntaxError", "biposition must be parenthesized: " + text);
  s = s.substr(1, s.size() - 2);
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() == 2) return right_bip(parse_position(parts[0]), parse_position(parts[1]));
  if (parts.size() == 3) return left_bip(parse_position(parts[0]), parse_var_key(parts[1]), parse_position(parts[2]));
  fail("SyntaxError", "biposition needs 2 or 3 components: " + text);
}

Bisupport bisupport(const SDerivation& d) {
  Bisupport b;
  for (const auto& [a, j] : d.nodes) {
    for (const auto& c : supp(j.type)) b[right_bip(a, c)] = *label_at(j.type, c);
    for (const auto& [x, s] : j.ctx)
      for (const auto& kc : supp(s)) b[left_bip(a, x, kc)] = *label_at(s, kc);
  }
  return b;
}

std::optional<std::string> bisupport_lookup(const SDerivation& d, const Biposition& p) {
  auto it = d.nodes.find(p.a);
  if (it == d.nodes.end()) return std::nullopt;
  if (!p.left) return label_at(it->second.type, p.c);
  auto xs = it->second.ctx.find(p.x);
  if (xs == it->second.ctx.end()) return std::nullopt;
  return label_at(xs->second, p.c);
}

std::vector<Position> axioms_above(const SDerivation& d, const Position& a, const VarKey& x) {
  std::vector<Position> out;
  if (!free_at(x, a)) return out;
  for (auto it = d.nodes.lower_bound(a); it != d.nodes.end() && is_prefix(a, it->first); ++it) {
    if (it->second.rule != Rule::Ax) continue;
    if (*var_key_at(d.term, collapse(it->first)) == x) out.push_back(it->first);
  }
  return out;
}

bool is_quantitative(const SDerivation& d) {
  for (const auto& [a, j] : d.nodes) {
    std::map<VarKey, std::vector<std::pair<Track, SType>>> want;
    for (auto it = d.nodes.lower_bound(a); it != d.nodes.end() && is_prefix(a, it->first); ++it) {
      if (it->second.rule != Rule::Ax) continue;
      VarKey x = *var_key_at(d.term, collapse(it->first));
      if (free_at(x, a)) want[x].emplace_back(it->second.track, it->second.type);
    }
    SContext expect;
    try {
      for (auto& [x, es] : want) expect[x] = make_seq(std::move(es));
    } catch (const DomainError&) {
      return false;
    }
    if (!equal(expect, j.ctx)) return false;
  }
  return true;
}

std::vector<Unanchored> unanchored_tracks(const SDerivation& d) {
  std::vector<Unanchored> out;
  for (const auto& [a, j] : d.nodes) {
    for (const auto& [x, s] : j.ctx) {
      std::set<Track> have;
      for (const auto& p : axioms_above(d, a, x)) have.insert(d.nodes.at(p).track);
      for (Track k : tracks(s))
        if (!have.count(k)) out.push_back(Unanchored{a, x, k});
    }
  }
  return out;
}

Position axiom_position(const SDerivation& d, const Position& a, const VarKey& x, Track k) {
  std::vector<Position> hits;
  for (const auto& p : axioms_above(d, a, x))
    if (d.nodes.at(p).track == k) hits.push_back(p);
  if (hits.size() != 1)
    fail("NotAnchored", "track " + std::to_string(k) + " of " + to_string(x) + " at " + to_string(a) + " has " +
                            std::to_string(hits.size()) + " axioms");
  return hits.front();
}

R0Derivation collapse_s_to_multiset(const SDerivation& d) {
  std::function<R0NodePtr(const Position&)> go = [&](const Position& a) -> R0NodePtr {
    const auto& j = d.nodes.at(a);
    Position p = collapse(a);
    switch (j.rule) {
      case Rule::Ax: return r0_ax(d.term, p, collapse_type(j.type));
      case Rule::Abs: return r0_abs(d.term, p, go(child(a, 0)));
      case Rule::App: {
        std::vector<R0NodePtr> args;
        for (auto it = d.nodes.upper_bound(child(a, 1)); it != d.nodes.end() && is_prefix(a, it->first); ++it)
          if (it->first.size() == a.size() + 1 && it->first.back() >= 2) args.push_back(go(it->first));
        return r0_app(d.term, p, go(child(a, 1)), std::move(args));
      }
    }
    return nullptr;
  };
  return {d.term, go({})};
}

SDerivation lift_r0_to_s(const R0Derivation& d) {
  struct Ax {
    Position spos;
    R0Type type;
    std::size_t order;
    VarKey key;
  };
  std::set<Position> supp;
  std::vector<Ax> axs;
  std::function<void(const R0NodePtr&, const Position&)> walk = [&](const R0NodePtr& n, const Position& sp) {
    supp.insert(sp);
    if (n->rule == Rule::Ax) {
      axs.push_back(Ax{sp, n->type, axs.size(), *var_key_at(d.term, n->pos)});
    } else if (n->rule == Rule::Abs) {
      walk(n->kids[0], child(sp, 0));
    } else {
      walk(n->kids[0], child(sp, 1));
      for (std::size_t i = 1; i < n->kids.size(); ++i) walk(n->kids[i], child(sp, static_cast<Letter>(i + 1)));
    }
  };
  walk(d.root, {});
  std::map<std::pair<bool, std::string>, std::vector<const Ax*>> groups;
  for (const auto& ax : axs) {
    std::pair<bool, std::string> g =
        ax.key.bound ? std::make_pair(true, to_string(Position(ax.spos.begin(), ax.spos.begin() + static_cast<std::ptrdiff_t>(ax.key.binder.size()))))
                     : std::make_pair(false, ax.key.name);
    groups[g].push_back(&ax);
  }
  std::map<Position, AxiomSpec> specs;
  for (auto& [g, members] : groups) {
    std::stable_sort(members.begin(), members.end(), [](const Ax* x, const Ax* y) {
      int c = compare(x->type, y->type);
      return c != 0 ? c < 0 : x->order < y->order;
    });
    for (std::size_t i = 0; i < members.size(); ++i)
      specs[members[i]->spos] = AxiomSpec{lift_type(members[i]->type), static_cast<Track>(i + 2)};
  }
  return derive_s(d.term, supp, specs);
}

SDerivation from_bisupport(const Term& t, const Bisupport& b) {
  std::map<Position, std::map<Position, std::string>> right;
  std::map<Position, std::map<VarKey, std::map<Position, std::string>>> left;
  for (const auto& [p, sym] : b) {
    if (p.left) {
      left[p.a][p.x][p.c] = sym;
    } else {
      right[p.a][p.c] = sym;
    }
  }
  std::function<SType(const std::map<Position, std::string>&, const Position&)> build =
      [&](const std::map<Position, std::string>& labels, const Position& c) -> SType {
    auto it = labels.find(c);
    if (it == labels.end()) fail("RuleMismatch", "type position " + to_string(c) + " missing");
    if (it->second != "->") return s_var(it->second);
    std::vector<std::pair<Track, SType>> es;
    for (auto jt = labels.upper_bound(c); jt != labels.end() && is_prefix(c, jt->first); ++jt)
      if (jt->first.size() == c.size() + 1 && jt->first.back() >= 2) es.emplace_back(jt->first.back(), build(labels, jt->first));
    return s_arrow(make_seq(std::move(es)), build(labels, child(c, 1)));
  };
  std::set<Position> supp;
  std::map<Position, AxiomSpec> axioms;
  for (const auto& [a, labels] : right) {
    if (!labels.count({})) fail("RuleMismatch", to_string(a) + ": no root type symbol");
    supp.insert(a);
    auto id = t.walk(collapse(a));
    if (!id) fail("RuleMismatch", to_string(a) + ": outside the subject");
    const auto kind = t.node(*id).kind;
    if (kind != NodeKind::Bound && kind != NodeKind::Free) continue;
    VarKey x = *var_key_at(t, collapse(a));
    Track k = 0;
    for (const auto& [kc, sym] : left[a][x])
      if (kc.size() == 1) k = kc[0];
    if (k == 0) fail("RuleMismatch", to_string(a) + ": axiom track missing");
    axioms[a] = AxiomSpec{build(labels, {}), k};
  }
  SDerivation d = derive_s(t, supp, axioms);
  if (bisupport(d) != b) fail("RuleMismatch", "labelled bisupport is not a derivation");
  return d;
}

std::string digest(const SDerivation& d) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
  };
  mix(canonical_form(d.term));
  for (const auto& [a, j] : d.nodes) {
    mix(to_string(a));
    mix(to_string(j.rule));
    mix(to_string(j.type));
    mix(to_string(j.ctx));
    mix(std::to_string(j.track));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nidt
