// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include "nidt/errors.hpp"
#include "nidt/fixtures.hpp"
#include "nidt/json_io.hpp"
#include "nidt/sderiv.hpp"
#include "nidt/stype.hpp"
#include "nidt/syntax.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace nidt;

namespace {

Position P(const char* s) { return parse_position(s); }
Term T(const char* s) { return parse_term(s); }
SType S(const char* s) { return parse_s_type(s); }

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DomainError& e) {
    return e.code();
  }
  return "";
}

bool mentions(const CheckResult& r, const std::string& what) {
  for (const auto& d : r.diagnostics)
    if (d.find(what) != std::string::npos) return true;
  return false;
}

SType random_type(std::mt19937& rng, int depth) {
  if (depth == 0 || rng() % 3 == 0) return s_var(rng() % 2 ? "o" : "p");
  std::vector<std::pair<Track, SType>> dom;
  for (Track k = 2; k < 6; ++k)
    if (rng() % 2) dom.push_back({k, random_type(rng, depth - 1)});
  return s_arrow(make_seq(dom), random_type(rng, depth - 1));
}

SeqType random_seq(std::mt19937& rng) {
  std::vector<std::pair<Track, SType>> e;
  for (Track k = 2; k < 9; ++k)
    if (rng() % 3 == 0) e.push_back({k, random_type(rng, 2)});
  return make_seq(e);
}

const VarKey kX = bound_key("x", {});

}  // namespace

TEST(STypes, ParsePrintRoundTrip) {
  for (const char* s : {"o", "(2:o, 3:o') -> o", "() -> o", "(k>=2:(2:o) -> o) -> o", "mu X. (k>=2:X) -> o",
                        "(8:o, 3:o', 2:o) -> o'"}) {
    const SType t = S(s);
    EXPECT_TRUE(equal(S(to_string(t).c_str()), t)) << s;
  }
  EXPECT_EQ(to_string(S("(8:o, 3:o', 2:o) -> o'")), "(2:o, 3:o', 8:o) -> o'");
  EXPECT_EQ(code_of([] { parse_s_type("(2:o, 2:o) -> o"); }), "TrackConflict");
  EXPECT_EQ(code_of([] { parse_s_type("(1:o) -> o"); }), "TrackConflict");
  EXPECT_EQ(code_of([] { parse_s_type("(2:o -> o"); }), "SyntaxError");
}

TEST(STypes, CofiniteNormalForm) {
  const SType a = S("(2:o, k>=3:o) -> o");
  const SType b = S("(k>=2:o) -> o");
  EXPECT_TRUE(equal(a, b));
  EXPECT_FALSE(equal(S("(k>=3:o) -> o"), b));
  EXPECT_FALSE(is_finite(b));
  EXPECT_TRUE(is_finite(S("(2:o) -> o")));
}

TEST(STypes, SupportAlgebra) {
  std::mt19937 rng(41);
  for (int i = 0; i < 200; ++i) {
    const SType t = random_type(rng, 3);
    std::map<Position, std::string> tp;
    Position here;
    oracle::type_positions(t, here, tp);
    std::set<Position> want;
    for (const auto& [c, s] : tp) want.insert(c);
    EXPECT_EQ(supp(t), want) << to_string(t);
    for (const auto& [c, s] : tp) EXPECT_EQ(label_at(t, c), std::optional<std::string>(s));
    if (t->kind == SKind::Arrow) {
      std::set<Position> split{{}};
      for (const auto& c : supp(t->dom)) split.insert(c);
      for (const auto& c : supp(t->cod)) split.insert(concat(Position{1}, c));
      EXPECT_EQ(supp(t), split);
    }
  }
}

TEST(STypes, DisjointUnionLaws) {
  std::mt19937 rng(42);
  int defined = 0, conflicts = 0;
  for (int i = 0; i < 300; ++i) {
    const SContext a{{kX, random_seq(rng)}}, b{{kX, random_seq(rng)}}, c{{kX, random_seq(rng)}};
    std::set<Track> ta, tb;
    for (auto k : tracks(a.at(kX))) ta.insert(k);
    for (auto k : tracks(b.at(kX))) tb.insert(k);
    bool overlap = false;
    for (auto k : ta) overlap = overlap || tb.count(k);
    if (overlap) {
      ++conflicts;
      EXPECT_EQ(code_of([&] { ctx_union(a, b); }), "TrackConflict");
      continue;
    }
    ++defined;
    EXPECT_TRUE(equal(ctx_union(a, b), ctx_union(b, a)));
    std::string l, r;
    try {
      l = to_string(ctx_union(ctx_union(a, b), c));
    } catch (const DomainError&) {
      l = "conflict";
    }
    try {
      r = to_string(ctx_union(a, ctx_union(b, c)));
    } catch (const DomainError&) {
      r = "conflict";
    }
    EXPECT_EQ(l, r);
  }
  EXPECT_GT(defined, 30);
  EXPECT_GT(conflicts, 30);
}

TEST(SDerivation, ExampleChecks) {
  const SDerivation d = p_ex();
  const CheckResult r = check_s(d);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(to_string(conclusion(d)), "|- (2:o', 4:(2:o, 3:o', 8:o) -> o', 5:o, 9:o) -> o'");
  SDerivation bad = d;
  bad.nodes.at(P("08")).track = 2;  // the axiom at 03 already uses track 2
  const CheckResult rb = check_s(bad);
  EXPECT_FALSE(rb.ok);
  EXPECT_TRUE(mentions(rb, "RuleMismatch"));
  // Rebuilding with two occurrences of x on track 2 is a track conflict.
  const SType o = s_var("o"), o2 = s_var("o'");
  const SType s = s_arrow(make_seq({{8, o}, {3, o2}, {2, o}}), o2);
  EXPECT_EQ(code_of([&] {
              derive_s(d.term, support(d), {{P("01"), {s, 4}}, {P("08"), {o, 2}}, {P("03"), {o2, 2}}, {P("02"), {o, 9}}});
            }),
            "TrackConflict");
}

TEST(SDerivation, BisupportLookup) {
  const SDerivation d = p_ex();
  EXPECT_EQ(bisupport_lookup(d, right_bip(P("01"), P("1"))), std::optional<std::string>("o'"));
  EXPECT_EQ(bisupport_lookup(d, right_bip(P("01"), {})), std::optional<std::string>("->"));
  EXPECT_EQ(bisupport_lookup(d, left_bip(P("0"), kX, P("42"))), std::optional<std::string>("o"));
  EXPECT_EQ(bisupport_lookup(d, right_bip(P("07"), {})), std::nullopt);
  EXPECT_EQ(bisupport_lookup(d, right_bip(P("01"), P("7"))), std::nullopt);
}

TEST(SDerivation, BisupportMatchesTypeOracle) {
  for (const auto& [ast, r0] : gen::r0_corpus(43, 40)) {
    const SDerivation d = lift_r0_to_s(r0);
    const auto want = oracle::right_bisupport(d);
    std::size_t rights = 0;
    for (const auto& [p, sym] : bisupport(d)) {
      if (p.left) {
        // Left bipositions point into the context of a: (a, x, k.c) with k a track.
        const auto s = seq_at(d.nodes.at(p.a).ctx.at(p.x), p.c.front());
        ASSERT_TRUE(s.has_value());
        EXPECT_EQ(label_at(*s, suffix_after(p.c, 1)), std::optional<std::string>(sym));
        continue;
      }
      ++rights;
      EXPECT_EQ(want.at({p.a, p.c}), sym);
    }
    EXPECT_EQ(rights, want.size());
  }
}

TEST(SDerivation, Quantitativity) {
  EXPECT_TRUE(is_quantitative(p_ex()));
  SDerivation phantom = p_ex();
  phantom.nodes.at({}).ctx[free_key("x")] = make_seq({{8, s_var("o'")}});
  EXPECT_FALSE(is_quantitative(phantom));
  const Prefix tilde = tilde_p_prime_prefix(5);
  EXPECT_TRUE(check_s_prefix(tilde.derivation, tilde.derivation.term, tilde.open).ok);
  EXPECT_FALSE(is_quantitative(tilde.derivation));
  std::vector<std::string> un;
  for (const auto& u : unanchored_tracks(tilde.derivation))
    un.push_back("(" + to_string(u.a) + ", " + to_string(u.x) + ", " + std::to_string(u.k) + ")");
  EXPECT_EQ(un, (std::vector<std::string>{"(22, f, 3)", "(222, f, 3)", "(2222, f, 3)", "(22222, f, 3)"}));
  const Prefix plain = p_prime_prefix(5);
  EXPECT_TRUE(check_s_prefix(plain.derivation, plain.derivation.term, plain.open).ok);
  EXPECT_TRUE(unanchored_tracks(plain.derivation).empty());
}

TEST(SDerivation, FiniteValidDerivationsAreQuantitative) {
  for (const auto& [ast, r0] : gen::r0_corpus(44, 60)) {
    const SDerivation d = lift_r0_to_s(r0);
    ASSERT_TRUE(check_s(d).ok);
    EXPECT_TRUE(is_quantitative(d));
  }
}

TEST(SDerivation, AxiomPosition) {
  const SDerivation d = p_ex();
  EXPECT_EQ(axiom_position(d, P("0"), kX, 5), P("08"));
  EXPECT_EQ(axiom_position(d, P("0"), kX, 4), P("01"));
  EXPECT_EQ(axiom_position(d, P("01"), kX, 4), P("01"));
  EXPECT_EQ(code_of([&] { axiom_position(d, P("0"), kX, 7); }), "NotAnchored");
}

TEST(SDerivation, Collapse) {
  const R0Derivation c = collapse_s_to_multiset(p_ex());
  EXPECT_TRUE(check_r0(c).ok);
  // The function position carries sigma_ex = [o, o', o] -> o'.
  std::function<R0NodePtr(const R0NodePtr&)> find = [&](const R0NodePtr& n) -> R0NodePtr {
    if (n->pos == P("01")) return n;
    for (const auto& k : n->kids)
      if (auto r = find(k)) return r;
    return nullptr;
  };
  const auto fn = find(c.root);
  ASSERT_TRUE(fn);
  const R0Type o = r0_var("o"), o2 = r0_var("o'");
  EXPECT_TRUE(equal(fn->type, r0_arrow({o, o2, o}, o2)));
  EXPECT_EQ(to_string(fn->type), "[o, o, o'] -> o'");
  const Term x = T("x");
  const SDerivation ax = derive_s(x, {{}}, {{{}, {s_var("o"), 7}}});
  EXPECT_EQ(to_string(conclusion(collapse_s_to_multiset(ax))), "x:[o] |- o");
}

TEST(SDerivation, Lift) {
  const Term id = T("\\x. x");
  const R0Derivation r{id, r0_abs(id, {}, r0_ax(id, P("0"), r0_var("t")))};
  EXPECT_EQ(to_string(conclusion(lift_r0_to_s(r)).type), "(2:t) -> t");
  const Term yxx = T("\\x. y x x");
  const R0Type o = r0_var("o");
  const R0Type f = r0_arrow({o}, r0_arrow({o}, o));
  const R0Derivation two{yxx, r0_abs(yxx, {}, r0_app(yxx, P("0"), r0_app(yxx, P("01"), r0_ax(yxx, P("011"), f),
                                                                              {r0_ax(yxx, P("012"), o)}),
                                                         {r0_ax(yxx, P("02"), o)}))};
  ASSERT_TRUE(check_r0(two).ok);
  EXPECT_EQ(to_string(conclusion(lift_r0_to_s(two)).type), "(2:o, 3:o) -> o");
  const SDerivation p2 = lift_r0_to_s(build_pi_prime_n(2));
  EXPECT_TRUE(check_s(p2).ok);
  EXPECT_EQ(oracle::r0_shape(collapse_s_to_multiset(p2).root), oracle::r0_shape(build_pi_prime_n(2).root));
  const SDerivation p3 = lift_r0_to_s(build_pi_prime_n(3));
  EXPECT_TRUE(check_s(p3).ok);
  EXPECT_EQ(size(p3), 6u);
}

TEST(SDerivation, LiftCollapseRoundTrips) {
  const auto corpus = gen::r0_corpus(45, 100);
  ASSERT_GE(corpus.size(), 100u);
  for (const auto& [ast, r0] : corpus) {
    const SDerivation s = lift_r0_to_s(r0);
    ASSERT_TRUE(check_s(s).ok);
    EXPECT_EQ(oracle::r0_shape(collapse_s_to_multiset(s).root), oracle::r0_shape(r0.root)) << oracle::print(ast);
    EXPECT_EQ(digest(lift_r0_to_s(collapse_s_to_multiset(s))), digest(s));
  }
}

TEST(SDerivation, FromBisupportRebuilds) {
  for (const SDerivation& d : {p_ex(), identity_redex(), lift_r0_to_s(build_pi_prime_n(3))}) {
    const SDerivation r = from_bisupport(d.term, bisupport(d));
    EXPECT_EQ(digest(r), digest(d));
  }
}

TEST(SDerivation, RuleMismatchDiagnostics) {
  SDerivation d = p_ex();
  d.nodes.at(P("0")).type = s_var("o");
  const CheckResult r = check_s(d);
  EXPECT_FALSE(r.ok);
  EXPECT_TRUE(mentions(r, "RuleMismatch"));
}

TEST(SerializationS, RoundTrips) {
  const SDerivation d = p_ex();
  const SDerivation back = s_from_json(parse_json_text(dump(s_to_json(d))));
  EXPECT_EQ(digest(back), digest(d));
  EXPECT_TRUE(check_s(back).ok);
  const R0Derivation p3 = r0_from_json(parse_json_text(dump(r0_to_json(build_pi_prime_n(3)))));
  EXPECT_TRUE(check_r0(p3).ok);
  EXPECT_EQ(size(p3), 6u);
  EXPECT_EQ(code_of([] { parse_json_text(""); }), "SchemaViolation");
  EXPECT_EQ(code_of([] { s_from_json(parse_json_text("{\"schema\": \"r0-derivation/1\"}")); }), "SchemaViolation");
  const Prefix q = tilde_p_prime_prefix(5);
  std::set<Position> open;
  const SDerivation qb = s_from_json(parse_json_text(dump(s_to_json(q.derivation, q.open))), &open);
  EXPECT_EQ(open, q.open);
  EXPECT_EQ(digest(qb), digest(q.derivation));
}
