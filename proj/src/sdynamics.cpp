// SPDX-License-Identifier: MIT
#include "nidt/sdynamics.hpp"

#include <deque>
#include <functional>

#include "nidt/errors.hpp"
#include "nidt/reduction.hpp"

namespace nidt {

namespace {

Position child(const Position& a, Letter l) { return concat(a, {l}); }

bool is_redex(const Term& t, const Position& b) {
  auto id = t.walk(b);
  if (!id || t.node(*id).kind != NodeKind::App) return false;
  return t.node(t.node(*id).c0).kind == NodeKind::Abs;
}

// The rep of alpha: its prefix of length |b|, if that node collapses onto b.
std::optional<Position> rep_of(const SDerivation& d, const Position& b, const Position& alpha) {
  if (alpha.size() < b.size()) return std::nullopt;
  Position a(alpha.begin(), alpha.begin() + static_cast<std::ptrdiff_t>(b.size()));
  if (collapse(a) != b || !d.nodes.count(a)) return std::nullopt;
  return a;
}

VarKey redex_var(const Term& t, const Position& b) {
  Position lam = child(b, 1);
  return bound_key(t.node(*t.walk(lam)).name, lam);
}

bool is_redex_axiom(const SDerivation& d, const Position& b, const Position& p) {
  auto it = d.nodes.find(p);
  if (it == d.nodes.end() || it->second.rule != Rule::Ax) return false;
  auto k = var_key_at(d.term, collapse(p));
  return k && *k == redex_var(d.term, b);
}

// Offset of the x-axiom on track k below a.1.0, relative to a.1.0.
std::optional<Position> anchor(const SDerivation& d, const Position& b, const Position& a, Track k) {
  Position body = concat(a, {1, 0});
  for (auto it = d.nodes.lower_bound(body); it != d.nodes.end() && is_prefix(body, it->first); ++it)
    if (it->second.rule == Rule::Ax && it->second.track == k && is_redex_axiom(d, b, it->first))
      return suffix_after(it->first, body.size());
  return std::nullopt;
}

}  // namespace

std::string to_string(Undefined u) {
  switch (u) {
    case Undefined::None: return "defined";
    case Undefined::RedexVariable: return "redex variable";
    case Undefined::RedexRoot: return "redex root";
    case Undefined::RedexAbstraction: return "redex abstraction";
    case Undefined::PhantomTrack: return "phantom track";
  }
  return "?";
}

Residual residual_position(const SDerivation& d, const Position& b, const Position& alpha) {
  Residual r;
  auto a = rep_of(d, b, alpha);
  if (!a) {
    r.pos = alpha;
    r.trace = "outside the redex: identity";
    return r;
  }
  Position rest = suffix_after(alpha, a->size());
  if (rest.empty()) {
    r.why = Undefined::RedexRoot;
    r.trace = "a = " + to_string(*a) + ": redex root";
    return r;
  }
  if (rest.size() == 1 && rest[0] == 1) {
    r.why = Undefined::RedexAbstraction;
    r.trace = "a.1: redex abstraction";
    return r;
  }
  if (rest[0] == 1) {
    Position a0 = suffix_after(rest, 2);
    if (is_redex_axiom(d, b, alpha)) {
      r.why = Undefined::RedexVariable;
      r.trace = "a.10." + to_string(a0) + ": axiom typing the redex variable";
      return r;
    }
    r.pos = concat(*a, a0);
    r.trace = "body: a.10." + to_string(a0) + " -> a." + to_string(a0);
    return r;
  }
  Track k = rest[0];
  Position a0 = suffix_after(rest, 1);
  auto ak = anchor(d, b, *a, k);
  if (!ak) {
    r.why = Undefined::PhantomTrack;
    r.trace = "argument track " + std::to_string(k) + " has no axiom";
    return r;
  }
  r.pos = concat(concat(*a, *ak), a0);
  r.trace = "argument: a." + std::to_string(k) + "." + to_string(a0) + " -> a." + to_string(*ak) + "." + to_string(a0);
  return r;
}

SDerivation reduce_s(const SDerivation& d, const Position& b) {
  if (!is_redex(d.term, b)) fail("InvalidRedex", "no redex at " + to_string(b));
  SDerivation out;
  out.term = reduce_at(d.term, b);
  for (const auto& [alpha, j] : d.nodes) {
    auto r = residual_position(d, b, alpha);
    if (!r.pos) continue;
    SJudgment nj;
    nj.rule = j.rule;
    nj.type = j.type;
    nj.track = j.track;
    out.nodes[*r.pos] = std::move(nj);
  }
  recompute_contexts(out);
  return out;
}

std::optional<Biposition> residual_biposition(const SDerivation& d, const Position& b, const Biposition& p) {
  if (p.left) return std::nullopt;
  auto r = residual_position(d, b, p.a);
  if (!r.pos) return std::nullopt;
  return right_bip(*r.pos, p.c);
}

std::optional<Biposition> quasi_residual(const SDerivation& d, const Position& b, const Biposition& p) {
  if (p.left) return std::nullopt;
  auto r = residual_position(d, b, p.a);
  if (r.pos) return right_bip(*r.pos, p.c);
  auto a = *rep_of(d, b, p.a);
  switch (r.why) {
    case Undefined::RedexRoot: return right_bip(a, p.c);
    case Undefined::RedexVariable: {
      // The argument on the axiom's track takes its place.
      Position off = suffix_after(p.a, a.size() + 2);
      return right_bip(concat(a, off), p.c);
    }
    case Undefined::RedexAbstraction: {
      if (p.c.empty()) return right_bip(a, {});
      Position g0 = suffix_after(p.c, 1);
      if (p.c[0] == 1) return right_bip(a, g0);
      auto ak = anchor(d, b, a, p.c[0]);
      if (!ak) return std::nullopt;
      return right_bip(concat(a, *ak), g0);
    }
    default: return std::nullopt;
  }
}

ExpansionPolicy hash_policy() {
  return [](const Position& p) -> Track {
    std::uint64_t h = 1469598103934665603ULL;
    for (Letter l : p) {
      for (int i = 0; i < 8; ++i) {
        h ^= (l >> (8 * i)) & 0xff;
        h *= 1099511628211ULL;
      }
      h ^= 0x5c;
      h *= 1099511628211ULL;
    }
    return 2 + h % ((1ULL << 31) - 2);
  };
}

ExpansionPolicy reference_policy(const SDerivation& ref) {
  return [ref](const Position& p) -> Track {
    auto it = ref.nodes.find(p);
    if (it == ref.nodes.end() || it->second.rule != Rule::Ax)
      fail("InvalidStep", "reference derivation has no axiom at " + to_string(p));
    return it->second.track;
  };
}

SDerivation expand_s(const SDerivation& d, const Position& b, const Term& t, const ExpansionPolicy& policy) {
  if (!is_redex(t, b)) fail("SubjectMismatch", "no redex at " + to_string(b) + " in the target term");
  if (!term_equal(reduce_at(t, b), d.term)) fail("SubjectMismatch", "target does not reduce at " + to_string(b) + " to the subject");
  const VarKey x = bound_key(t.node(*t.walk(child(b, 1))).name, child(b, 1));
  const Position body = concat(b, {1, 0});

  SDerivation out;
  out.term = t;
  std::vector<Position> reps;
  for (const auto& [a, j] : d.nodes)
    if (a.size() == b.size() && collapse(a) == b) reps.push_back(a);

  std::set<Position> moved;
  for (const auto& a : reps) {
    std::vector<std::pair<Track, SType>> dom;
    // beta ranges over offsets below a; inside an argument copy `arg` holds (track, start).
    std::function<void(const Position&, std::optional<std::pair<Track, std::size_t>>)> go =
        [&](const Position& beta, std::optional<std::pair<Track, std::size_t>> arg) {
          const Position here = concat(a, beta);
          const SJudgment& j = d.nodes.at(here);
          moved.insert(here);
          if (!arg) {
            auto k = var_key_at(t, concat(body, collapse(beta)));
            if (k && *k == x) {
              Position ax = concat(concat(a, {1, 0}), beta);
              Track tr = policy(ax);
              for (const auto& e : dom)
                if (e.first == tr) fail("TrackConflict", "policy reused track " + std::to_string(tr) + " at " + to_string(a));
              dom.emplace_back(tr, j.type);
              SJudgment axj;
              axj.rule = Rule::Ax;
              axj.type = j.type;
              axj.track = tr;
              out.nodes[ax] = axj;
              arg = std::make_pair(tr, beta.size());
            }
          }
          Position target = arg ? concat(concat(a, {arg->first}), suffix_after(beta, arg->second))
                                : concat(concat(a, {1, 0}), beta);
          SJudgment nj;
          nj.rule = j.rule;
          nj.type = j.type;
          nj.track = j.track;
          out.nodes[target] = nj;
          for (auto it = d.nodes.upper_bound(here); it != d.nodes.end() && is_prefix(here, it->first); ++it)
            if (it->first.size() == here.size() + 1) go(child(beta, it->first.back()), arg);
        };
    go({}, std::nullopt);
    SJudgment abs;
    abs.rule = Rule::Abs;
    abs.type = s_arrow(make_seq(dom), d.nodes.at(a).type);
    out.nodes[child(a, 1)] = abs;
    SJudgment app;
    app.rule = Rule::App;
    app.type = d.nodes.at(a).type;
    out.nodes[a] = app;
  }
  for (const auto& [p, j] : d.nodes) {
    if (moved.count(p)) continue;
    SJudgment nj;
    nj.rule = j.rule;
    nj.type = j.type;
    nj.track = j.track;
    out.nodes[p] = nj;
  }
  recompute_contexts(out);
  return out;
}

std::set<Biposition> equinecessary_closure(const SDerivation& d, const std::set<Biposition>& B) {
  const Bisupport bs = bisupport(d);
  auto in = [&](const Biposition& p) { return bs.count(p) > 0; };
  std::set<Biposition> seen;
  std::deque<Biposition> todo;
  auto push = [&](const Biposition& p) {
    if (in(p) && seen.insert(p).second) todo.push_back(p);
  };
  for (const auto& p : B) {
    if (!in(p)) fail("NotContained", to_string(p) + " is not in the bisupport");
    push(p);
  }
  while (!todo.empty()) {
    Biposition p = todo.front();
    todo.pop_front();
    const SJudgment& j = d.nodes.at(p.a);
    if (!p.a.empty()) push(right_bip(Position(p.a.begin(), p.a.end() - 1), {}));
    if (!p.left) {
      if (!p.c.empty()) push(right_bip(p.a, Position(p.c.begin(), p.c.end() - 1)));
      switch (j.rule) {
        case Rule::Ax:
          push(left_bip(p.a, *var_key_at(d.term, collapse(p.a)), concat({j.track}, p.c)));
          break;
        case Rule::Abs: {
          if (p.c.empty()) {
            push(right_bip(child(p.a, 0), {}));
          } else if (p.c[0] == 1) {
            push(right_bip(child(p.a, 0), suffix_after(p.c, 1)));
          } else {
            Position lam = collapse(p.a);
            push(left_bip(child(p.a, 0), bound_key(d.term.node(*d.term.walk(lam)).name, lam), p.c));
          }
          break;
        }
        case Rule::App: push(right_bip(child(p.a, 1), concat({1}, p.c))); break;
      }
      // Premise side of App: the left premise's type links to the conclusion and arguments.
      if (!p.a.empty() && p.a.back() == 1 && !p.c.empty()) {
        Position a(p.a.begin(), p.a.end() - 1);
        if (d.nodes.at(a).rule == Rule::App) {
          if (p.c[0] == 1) push(right_bip(a, suffix_after(p.c, 1)));
          else push(right_bip(child(a, p.c[0]), suffix_after(p.c, 1)));
        }
      }
      // Argument of an App links back to the left premise's domain.
      if (!p.a.empty() && p.a.back() >= 2) {
        Position a(p.a.begin(), p.a.end() - 1);
        push(right_bip(child(a, 1), concat({p.a.back()}, p.c)));
      }
      // Body of an Abs links to the abstraction's codomain.
      if (!p.a.empty() && p.a.back() == 0) push(right_bip(Position(p.a.begin(), p.a.end() - 1), concat({1}, p.c)));
    } else {
      if (p.c.size() > 1) push(left_bip(p.a, p.x, Position(p.c.begin(), p.c.end() - 1)));
      push(right_bip(p.a, {}));
      const Track k = p.c[0];
      switch (j.rule) {
        case Rule::Ax: push(right_bip(p.a, suffix_after(p.c, 1))); break;
        case Rule::Abs: push(left_bip(child(p.a, 0), p.x, p.c)); break;
        case Rule::App:
          for (auto it = d.nodes.upper_bound(p.a); it != d.nodes.end() && is_prefix(p.a, it->first); ++it) {
            if (it->first.size() != p.a.size() + 1) continue;
            auto xs = it->second.ctx.find(p.x);
            if (xs != it->second.ctx.end() && seq_at(xs->second, k)) push(left_bip(it->first, p.x, p.c));
          }
          break;
      }
      // Descent back: a premise's context entry reappears in the conclusion, or in the
      // abstraction's domain when x is bound there.
      if (!p.a.empty()) {
        Position a(p.a.begin(), p.a.end() - 1);
        const SJudgment& pj = d.nodes.at(a);
        if (pj.rule == Rule::Abs) {
          Position lam = collapse(a);
          VarKey bx = bound_key(d.term.node(*d.term.walk(lam)).name, lam);
          if (p.x == bx) push(right_bip(a, p.c));
          else push(left_bip(a, p.x, p.c));
        } else {
          push(left_bip(a, p.x, p.c));
        }
      }
    }
  }
  return seen;
}

}  // namespace nidt
