// SPDX-License-Identifier: MIT
#include "nidt/nf.hpp"

#include <algorithm>

#include "nidt/errors.hpp"
#include "nidt/reduction.hpp"

namespace nidt {

namespace {

Position child(const Position& a, Letter l) { return concat(a, {l}); }

bool is_var(const Term& t, const Position& a) {
  auto id = t.walk(collapse(a));
  return id && (t.node(*id).kind == NodeKind::Bound || t.node(*id).kind == NodeKind::Free);
}

VarKey binder_key(const Term& t, const Position& a) {
  Position p = collapse(a);
  return bound_key(t.node(*t.walk(p)).name, p);
}

// Call(a) with every X_a' replaced by T(a'), memoized.
struct Extension {
  const Term& t;
  Membership in_A;
  std::function<std::vector<Track>(const Position&)> arg_tracks;
  std::function<std::vector<Position>(const Position&, const VarKey&)> axioms_of;
  const Assignment& assign;
  const TrackPolicy& policy;
  std::map<Position, SType> memo;

  SType assigned(const Position& a) const {
    auto it = assign.find(a);
    return it == assign.end() ? s_var("o") : it->second;
  }

  SType type(const Position& a) {
    auto it = memo.find(a);
    if (it != memo.end()) return it->second;
    Clev c = clev(in_A, a);
    SType cur = assigned(c.anchor);
    if (c.kind == ClevKind::NonZero) {
      for (std::size_t i = c.level; i >= 1; --i) {
        Position below = a;
        below.insert(below.end(), i, 0);
        Position binder(below.begin(), below.end() - 1);
        std::vector<std::pair<Track, SType>> dom;
        for (const auto& a0 : axioms_of(below, binder_key(t, binder))) dom.emplace_back(policy(a0), type(a0));
        cur = s_arrow(make_seq(std::move(dom)), cur);
      }
    } else if (c.kind == ClevKind::Partial) {
      for (std::size_t i = c.level; i >= 1; --i) {
        Position app = c.anchor;
        app.insert(app.end(), c.level - i, 1);
        std::vector<std::pair<Track, SType>> dom;
        for (Track k : arg_tracks(app)) dom.emplace_back(k, type(child(app, k)));
        cur = s_arrow(make_seq(std::move(dom)), cur);
      }
    }
    memo[a] = cur;
    return cur;
  }
};

Extension finite_extension(const SupportCandidate& c, const Assignment& assign, const TrackPolicy& policy) {
  const std::set<Position>& A = c.A;
  const Term& t = c.term;
  return Extension{
      t,
      [&A](const Position& p) { return A.count(p) > 0; },
      [&A](const Position& p) {
        std::vector<Track> ks;
        for (auto it = A.upper_bound(child(p, 1)); it != A.end() && is_prefix(p, *it); ++it)
          if (it->size() == p.size() + 1 && it->back() >= 2) ks.push_back(it->back());
        return ks;
      },
      [&A, &t](const Position& a, const VarKey& x) {
        std::vector<Position> out;
        for (auto it = A.lower_bound(a); it != A.end() && is_prefix(a, *it); ++it)
          if (is_var(t, *it) && *var_key_at(t, collapse(*it)) == x) out.push_back(*it);
        return out;
      },
      assign,
      policy,
      {}};
}

}  // namespace

void validate_candidate(const SupportCandidate& c) {
  if (!is_normal_form(c.term)) fail("NotNormalForm", "the subject has a redex");
  if (c.A.empty() || !c.A.count({})) fail("InvalidCandidate", "candidate must contain the root");
  for (const auto& a : c.A) {
    auto id = c.term.walk(collapse(a));
    if (!id) fail("InvalidCandidate", to_string(a) + " is outside the term");
    const auto& n = c.term.node(*id);
    if (!a.empty()) {
      Position parent(a.begin(), a.end() - 1);
      if (!c.A.count(parent)) fail("InvalidCandidate", to_string(a) + " has no parent in the candidate");
      const auto pk = c.term.node(*c.term.walk(collapse(parent))).kind;
      Letter l = a.back();
      if ((pk == NodeKind::Abs && l != 0) || (pk == NodeKind::App && l == 0))
        fail("InvalidCandidate", to_string(a) + " uses a letter unfit for its parent");
    }
    if (n.kind == NodeKind::Abs && !c.A.count(child(a, 0)))
      fail("InvalidCandidate", "not closed for the spine order: " + to_string(child(a, 0)) + " missing");
    if (n.kind == NodeKind::App && !c.A.count(child(a, 1)))
      fail("InvalidCandidate", "not closed for the spine order: " + to_string(child(a, 1)) + " missing");
  }
}

std::string to_string(ClevKind k) {
  switch (k) {
    case ClevKind::Unconstrained: return "unconstrained";
    case ClevKind::Partial: return "partial";
    case ClevKind::NonZero: return "nonzero";
  }
  return "?";
}

Clev clev(const Membership& in_A, const Position& a) {
  Clev c;
  if (in_A(child(a, 0))) {
    Position p = child(a, 0);
    c.level = 1;
    while (in_A(child(p, 0))) {
      p.push_back(0);
      ++c.level;
    }
    c.kind = ClevKind::NonZero;
    c.anchor = p;
    return c;
  }
  Position p = a;
  while (!p.empty() && p.back() == 1) {
    p.pop_back();
    ++c.level;
  }
  c.kind = c.level == 0 ? ClevKind::Unconstrained : ClevKind::Partial;
  c.anchor = p;
  return c;
}

Clev clev(const std::set<Position>& A, const Position& a) {
  return clev([&A](const Position& p) { return A.count(p) > 0; }, a);
}

TrackPolicy shortlex_policy(const SupportCandidate& c) {
  std::vector<Position> vars;
  for (const auto& a : c.A)
    if (is_var(c.term, a)) vars.push_back(a);
  std::sort(vars.begin(), vars.end(), shortlex_less);
  return [vars](const Position& p) -> Track {
    auto it = std::lower_bound(vars.begin(), vars.end(), p, shortlex_less);
    if (it == vars.end() || *it != p) fail("InvalidCandidate", to_string(p) + " is not a variable position");
    return static_cast<Track>(it - vars.begin()) + 2;
  };
}

FullSupportIndex::FullSupportIndex(Term t) : t_(std::move(t)) { frontier_.emplace_back(t_.root(), Position{}); }

void FullSupportIndex::grow() {
  constexpr std::size_t kMaxFrontier = 1u << 20;
  if (frontier_.empty()) {
    exhausted_ = true;
    return;
  }
  std::vector<Position> level;
  std::vector<std::pair<NodeId, Position>> next;
  for (const auto& [id, pos] : frontier_) {
    const auto& n = t_.node(id);
    switch (n.kind) {
      case NodeKind::Bound:
      case NodeKind::Free: level.push_back(pos); break;
      case NodeKind::Abs: next.emplace_back(n.c0, child(pos, 0)); break;
      case NodeKind::App:
        next.emplace_back(n.c0, child(pos, 1));
        next.emplace_back(n.c1, child(pos, 2));
        break;
    }
  }
  if (next.size() > kMaxFrontier) fail("InfiniteSupport", "full support grows too fast to index");
  std::sort(level.begin(), level.end());
  vars_.insert(vars_.end(), level.begin(), level.end());
  frontier_ = std::move(next);
  ++done_;
}

Track FullSupportIndex::track_of(const Position& p) {
  while (done_ <= p.size() && !exhausted_) grow();
  auto it = std::lower_bound(vars_.begin(), vars_.end(), p, shortlex_less);
  if (it == vars_.end() || *it != p) fail("InvalidCandidate", to_string(p) + " is not a variable position of the full support");
  return static_cast<Track>(it - vars_.begin()) + 2;
}

std::optional<Position> FullSupportIndex::position_of(Track k) {
  constexpr std::size_t kMaxLevels = 4096;
  if (k < 2) return std::nullopt;
  const std::size_t idx = static_cast<std::size_t>(k - 2);
  while (vars_.size() <= idx && !exhausted_ && done_ < kMaxLevels) grow();
  if (vars_.size() <= idx) return std::nullopt;
  return vars_[idx];
}

bool FullSupportIndex::contains(const Position& a) const {
  for (Letter l : a)
    if (l > 2) return false;
  return t_.walk(a).has_value();
}

std::map<Position, SType> natural_types(const SupportCandidate& c, const Assignment& assign, const TrackPolicy& policy) {
  validate_candidate(c);
  Extension ext = finite_extension(c, assign, policy);
  std::map<Position, SType> out;
  for (const auto& a : c.A) out[a] = ext.type(a);
  return out;
}

SDerivation natural_extension(const SupportCandidate& c, const Assignment& assign, const TrackPolicy& policy) {
  auto types = natural_types(c, assign, policy);
  std::map<Position, AxiomSpec> axioms;
  for (const auto& a : c.A)
    if (is_var(c.term, a)) axioms[a] = AxiomSpec{types.at(a), policy(a)};
  SDerivation d = derive_s(c.term, c.A, axioms);
  for (const auto& [a, j] : d.nodes)
    if (!equal(j.type, types.at(a))) fail("InvalidCandidate", "derived type differs from Call at " + to_string(a));
  return d;
}

NFGenerator unforgetful_nf_typing(const Term& t) {
  if (!is_normal_form(t)) fail("NotNormalForm", "the subject has a redex");
  NFGenerator g;
  g.term = t;
  g.index = std::make_shared<FullSupportIndex>(t);
  return g;
}

std::set<Position> rank_support(const NFGenerator& g, std::size_t n) {
  std::set<Position> out;
  for (const auto& a : support_to_depth(g.term, n))
    if (rank(a) <= n) out.insert(a);
  return out;
}

SDerivation rank_truncate(const NFGenerator& g, std::size_t n) {
  SupportCandidate c{g.term, rank_support(g, n)};
  auto index = g.index;
  return natural_extension(c, {}, [index](const Position& p) { return index->track_of(p); });
}

std::size_t called_rank(const NFGenerator& g, const Biposition& p) {
  FullSupportIndex& index = *g.index;
  Membership in_A = [&index](const Position& a) { return index.contains(a); };
  auto axiom = [&](Track k, const Position& above, const VarKey& x) {
    auto a0 = index.position_of(k);
    if (!a0 || !is_prefix(above, *a0) || !is_var(g.term, *a0) || !(*var_key_at(g.term, collapse(*a0)) == x))
      fail("NotContained", "no axiom on track " + std::to_string(k) + " above " + to_string(above));
    return *a0;
  };
  std::function<std::size_t(const Position&, const Position&)> cr = [&](const Position& a, const Position& c) -> std::size_t {
    if (!in_A(a)) fail("NotContained", to_string(a) + " is outside the full support");
    Clev cl = clev(in_A, a);
    std::size_t i = 0;
    while (i < c.size() && i < cl.level && c[i] == 1) ++i;
    if (cl.kind == ClevKind::Unconstrained || i >= cl.level || i == c.size()) return std::max(rank(a), rank(c));
    const Track k = c[i];
    if (k < 2) fail("NotContained", "type position " + to_string(c) + " at " + to_string(a));
    const Position rest = suffix_after(c, i + 1);
    if (cl.kind == ClevKind::NonZero) {
      Position below = a;
      below.insert(below.end(), i + 1, 0);
      Position binder(below.begin(), below.end() - 1);
      return cr(axiom(k, below, binder_key(g.term, binder)), rest);
    }
    Position app = cl.anchor;
    app.insert(app.end(), cl.level - 1 - i, 1);
    return cr(child(app, k), rest);
  };
  if (!p.left) return cr(p.a, p.c);
  if (p.c.empty()) fail("NotContained", "left biposition without a track");
  return cr(axiom(p.c[0], p.a, p.x), suffix_after(p.c, 1));
}

RankFamily nf_family(const NFGenerator& g) {
  RankFamily f;
  f.member = [g](std::size_t n) { return rank_truncate(g, n); };
  f.called_rank = [g](const Biposition& p) { return called_rank(g, p); };
  f.max_rank = g.max_rank;
  return f;
}

bool generator_unforgetful(const Term& t) {
  if (!is_normal_form(t)) fail("NotNormalForm", "the subject has a redex");
  const std::size_t n = t.graph_size();
  auto ix = [](NodeId g) { return static_cast<std::size_t>(g); };
  std::vector<std::vector<char>> has(n), ex_neg(n), ex_pos(n);
  for (std::size_t g = 0; g < n; ++g) {
    has[g].assign(t.fvb(static_cast<NodeId>(g)), 0);
    ex_neg[g].assign(t.fvb(static_cast<NodeId>(g)), 0);
    ex_pos[g].assign(t.fvb(static_cast<NodeId>(g)), 0);
  }
  std::vector<char> pos_t(n, 0), neg_t(n, 0), free_neg(n, 0);
  auto at = [&](const std::vector<std::vector<char>>& v, NodeId g, std::uint32_t j) {
    return j < v[ix(g)].size() && v[ix(g)][j];
  };
  struct Spine {
    NodeId head;
    std::vector<NodeId> args;
  };
  auto spine = [&](NodeId g) {
    Spine s;
    while (t.node(g).kind == NodeKind::App) {
      s.args.push_back(t.node(g).c1);
      g = t.node(g).c0;
    }
    s.head = g;
    return s;
  };
  // Occurrences of binders: least fixpoint first, since vacuity is a negation.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t g = 0; g < n; ++g) {
      const auto& nd = t.node(static_cast<NodeId>(g));
      for (std::uint32_t j = 0; j < has[g].size(); ++j) {
        bool v = false;
        if (nd.kind == NodeKind::Bound) v = nd.index == j;
        if (nd.kind == NodeKind::Abs) v = at(has, nd.c0, j + 1);
        if (nd.kind == NodeKind::App) v = at(has, nd.c0, j) || at(has, nd.c1, j);
        if (v && !has[g][j]) has[g][j] = changed = true;
      }
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    auto set = [&](char& cell, bool v) {
      if (v && !cell) cell = changed = true;
    };
    for (std::size_t g = 0; g < n; ++g) {
      const NodeId id = static_cast<NodeId>(g);
      const auto& nd = t.node(id);
      if (nd.kind == NodeKind::Abs) {
        std::uint32_t depth = 0;
        NodeId u = id;
        while (t.node(u).kind == NodeKind::Abs) {
          u = t.node(u).c0;
          ++depth;
        }
        bool pos = false, neg = false;
        for (std::uint32_t j = 0; j < depth; ++j) {
          pos = pos || at(ex_neg, u, j);
          neg = neg || !at(has, u, j) || at(ex_pos, u, j);
        }
        set(pos_t[g], pos);
        set(neg_t[g], neg);
        for (std::uint32_t j = 0; j < ex_neg[g].size(); ++j) {
          set(ex_neg[g][j], at(ex_neg, nd.c0, j + 1));
          set(ex_pos[g][j], at(ex_pos, nd.c0, j + 1));
        }
        set(free_neg[g], free_neg[ix(nd.c0)]);
      } else if (nd.kind == NodeKind::App) {
        Spine s = spine(id);
        bool any_pos = false, any_neg = false, fneg = false;
        for (NodeId a : s.args) {
          any_pos = any_pos || pos_t[ix(a)];
          any_neg = any_neg || neg_t[ix(a)];
          fneg = fneg || free_neg[ix(a)];
        }
        const auto& h = t.node(s.head);
        for (std::uint32_t j = 0; j < ex_neg[g].size(); ++j) {
          bool hn = h.kind == NodeKind::Bound && h.index == j && any_pos;
          bool hp = h.kind == NodeKind::Bound && h.index == j && any_neg;
          for (NodeId a : s.args) {
            hn = hn || at(ex_neg, a, j);
            hp = hp || at(ex_pos, a, j);
          }
          set(ex_neg[g][j], hn);
          set(ex_pos[g][j], hp);
        }
        set(free_neg[g], fneg || (h.kind == NodeKind::Free && any_pos));
      }
    }
  }
  return !pos_t[ix(t.root())] && !free_neg[ix(t.root())];
}

}  // namespace nidt
