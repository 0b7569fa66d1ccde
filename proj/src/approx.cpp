// SPDX-License-Identifier: MIT
#include "nidt/approx.hpp"

#include "nidt/errors.hpp"

namespace nidt {

namespace {

bool contains(const Bisupport& big, const Bisupport& small) {
  for (const auto& [p, s] : small) {
    auto it = big.find(p);
    if (it == big.end() || it->second != s) return false;
  }
  return true;
}

void same_subject(const std::vector<SDerivation>& ds) {
  if (ds.empty()) fail("NotDirected", "empty family");
  for (const auto& d : ds)
    if (!term_equal(d.term, ds.front().term)) fail("SubjectMismatch", "derivations type different terms");
}

// t and u carry the same labels at every given term position.
bool agrees_on(const Term& t, const Term& u, const std::set<Position>& ps) {
  for (const auto& p : ps) {
    auto a = t.walk(p), b = u.walk(p);
    if (!a || !b || !same_label(t, *a, u, *b)) return false;
  }
  return true;
}

SDerivation substitute_subject(const SDerivation& d, const Term& u) {
  SDerivation out = d;
  out.term = u;
  recompute_contexts(out);
  return out;
}

}  // namespace

bool leq_approx(const SDerivation& d1, const SDerivation& d2) {
  if (!term_equal(d1.term, d2.term)) fail("SubjectMismatch", "derivations type different terms");
  return contains(bisupport(d2), bisupport(d1));
}

SDerivation join(const std::vector<SDerivation>& ds) {
  same_subject(ds);
  Bisupport u;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (const auto& [p, s] : bisupport(ds[i])) {
      auto [it, fresh] = u.emplace(p, s);
      if (!fresh && it->second != s)
        fail("NotDirected", "members disagree at " + to_string(p) + " (member " + std::to_string(i) + ")");
    }
  }
  try {
    return from_bisupport(ds.front().term, u);
  } catch (const DomainError& e) {
    fail("NotDirected", std::string("union is not a derivation: ") + e.what());
  }
}

SDerivation meet(const std::vector<SDerivation>& ds) {
  same_subject(ds);
  Bisupport m = bisupport(ds.front());
  for (std::size_t i = 1; i < ds.size(); ++i) {
    Bisupport b = bisupport(ds[i]);
    for (auto it = m.begin(); it != m.end();) {
      auto jt = b.find(it->first);
      if (jt == b.end() || jt->second != it->second) {
        it = m.erase(it);
      } else {
        ++it;
      }
    }
  }
  try {
    return from_bisupport(ds.front().term, m);
  } catch (const DomainError& e) {
    fail("NotDirected", std::string("intersection is not a derivation: ") + e.what());
  }
}

Approximant find_finite_approximant(const RankFamily& family, const std::set<Biposition>& B) {
  std::map<std::size_t, SDerivation> cache;
  auto get = [&](std::size_t n) -> std::optional<SDerivation> {
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    try {
      SDerivation d = family.member(n);
      cache.emplace(n, d);
      return d;
    } catch (const DomainError& e) {
      if (e.code() != "InvalidCandidate") throw;
      return std::nullopt;
    }
  };
  std::optional<std::size_t> least;
  for (std::size_t n = 0; n <= family.max_rank && !least; ++n)
    if (get(n)) least = n;
  if (!least) fail("NotContained", "family has no member up to rank " + std::to_string(family.max_rank));
  std::size_t m = *least;
  if (family.called_rank)
    for (const auto& p : B) m = std::max(m, family.called_rank(p));
  auto holds_b = [&](const SDerivation& d) {
    const Bisupport bs = bisupport(d);
    for (const auto& p : B)
      if (!bs.count(p)) return false;
    return true;
  };
  std::optional<SDerivation> top;
  for (; m <= family.max_rank; ++m) {
    top = get(m);
    if (top && holds_b(*top)) break;
  }
  if (m > family.max_rank) fail("NotContained", "no member up to rank " + std::to_string(family.max_rank) + " contains B");
  const std::set<Biposition> closure = equinecessary_closure(*top, B);
  const Bisupport full = bisupport(*top);
  for (std::size_t n = *least; n <= m; ++n) {
    auto d = get(n);
    if (!d) continue;
    const Bisupport bs = bisupport(*d);
    bool ok = true;
    for (const auto& p : closure) {
      auto it = bs.find(p);
      if (it == bs.end() || it->second != full.at(p)) {
        ok = false;
        break;
      }
    }
    if (ok) return {*d, n};
  }
  return {*top, m};
}

MemberExpansion expand_member(const SDerivation& d, const Path& path, const ExpansionPolicy& policy) {
  std::set<Position> typed;
  for (const auto& kv : d.nodes) typed.insert(collapse(kv.first));
  const std::size_t len = path.steps.size();
  std::size_t n = len + 1;
  for (std::size_t cand = len + 1; cand-- > 0;) {
    bool untouched = true;
    for (std::size_t m = cand; m < len && untouched; ++m)
      for (const auto& p : path.steps[m].positions) untouched = untouched && !typed.count(p);
    if (!untouched) break;
    if (agrees_on(path.terms[cand], d.term, typed)) n = cand;
  }
  if (n > len) fail("PathTooShort", "no recorded term agrees with the subject on every typed position");
  SDerivation cur = substitute_subject(d, path.terms[n]);
  for (std::size_t i = n; i-- > 0;) {
    std::vector<Term> mids{path.terms[i]};
    for (const auto& p : path.steps[i].positions) mids.push_back(reduce_at(mids.back(), p));
    cur = substitute_subject(cur, mids.back());
    for (std::size_t j = path.steps[i].positions.size(); j-- > 0;)
      cur = expand_s(cur, path.steps[i].positions[j], mids[j], policy);
  }
  return {cur, n};
}

RankFamily expand_infinitary(const RankFamily& family, const Path& path) {
  RankFamily out;
  out.max_rank = family.max_rank;
  auto member = family.member;
  out.member = [member, path](std::size_t n) { return expand_member(member(n), path).derivation; };
  return out;
}

std::map<Position, SJudgment> infinitary_reduce_family(const SDerivation& d, const Path& path, std::size_t level) {
  if (!path.steps.empty() && path.steps.back().depth <= level)
    fail("NotStable", "level " + std::to_string(level) + " still changes at the last recorded step");
  std::size_t last = 0;  // number of steps to apply
  for (std::size_t i = 0; i < path.steps.size(); ++i)
    if (path.steps[i].depth <= level) last = i + 1;
  SDerivation cur = d;
  for (std::size_t i = 0; i < last; ++i)
    for (const auto& p : path.steps[i].positions) cur = reduce_s(cur, p);
  std::map<Position, SJudgment> out;
  for (const auto& [a, j] : cur.nodes)
    if (applicative_depth(a) <= level) out.emplace(a, j);
  return out;
}

bool s_derivation_exists(const Term& t, std::size_t max_size) { return r0_derivation_exists(t, max_size); }

}  // namespace nidt
