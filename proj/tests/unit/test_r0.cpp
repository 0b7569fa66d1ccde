// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include "nidt/errors.hpp"
#include "nidt/fixtures.hpp"
#include "nidt/r0.hpp"
#include "nidt/syntax.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace nidt;

namespace {

Position P(const char* s) { return parse_position(s); }
Term T(const char* s) { return parse_term(s); }
R0Type o() { return r0_var("o"); }

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DomainError& e) {
    return e.code();
  }
  return "";
}

R0Derivation identity_typed(const R0Type& tau) {
  const Term t = T("\\x. x");
  return {t, r0_abs(t, {}, r0_ax(t, P("0"), tau))};
}

// The node at a subject position, for trees with one node per position.
R0NodePtr node_at(const R0NodePtr& n, const Position& p) {
  if (n->pos == p) return n;
  for (const auto& k : n->kids)
    if (is_prefix(k->pos, p))
      if (auto r = node_at(k, p)) return r;
  return nullptr;
}

}  // namespace

TEST(R0Check, IdentityAndRelevance) {
  const R0Derivation d = identity_typed(o());
  EXPECT_TRUE(check_r0(d).ok);
  EXPECT_EQ(to_string(conclusion(d)), "|- [o] -> o");
  auto bad = std::make_shared<R0Node>(*d.root);
  bad->type = r0_arrow({o(), r0_var("s")}, o());
  const CheckResult r = check_r0({d.term, bad});
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(R0Check, PiPrimeFamily) {
  const R0Derivation p1 = build_pi_prime_n(1);
  EXPECT_TRUE(check_r0(p1).ok);
  EXPECT_EQ(size(p1), 2u);
  EXPECT_EQ(to_string(conclusion(p1)), "f:[[] -> o] |- o");
  for (std::size_t n = 1; n <= 6; ++n) {
    const R0Derivation d = build_pi_prime_n(n);
    EXPECT_TRUE(check_r0(d, T("fix X. f X")).ok);
    EXPECT_EQ(size(d), oracle::r0_count(d.root));
    EXPECT_EQ(size(d), 2 * n);
    EXPECT_TRUE(equal(conclusion(d).ctx, oracle::gamma(n)));
    EXPECT_TRUE(equal(gamma_n(n), oracle::gamma(n)));
  }
  EXPECT_EQ(size(build_pi_prime_n(4)), 8u);
}

TEST(R0TypeHnf, Shapes) {
  const R0Derivation a = type_hnf(T("x ((\\x. x x) (\\x. x x))"));
  EXPECT_TRUE(check_r0(a).ok);
  EXPECT_EQ(to_string(conclusion(a)), "x:[[] -> o] |- o");
  const R0Derivation b = type_hnf(T("\\x. x"));
  EXPECT_TRUE(check_r0(b).ok);
  EXPECT_EQ(to_string(conclusion(b)), "|- [o] -> o");
  const R0Derivation c = type_hnf(T("\\x1. x t1 t2"));
  EXPECT_TRUE(check_r0(c).ok);
  EXPECT_EQ(to_string(conclusion(c).type), "[] -> o");
  EXPECT_EQ(typed_positions(c), (std::set<Position>{P("e"), P("0"), P("01"), P("011")}));
  EXPECT_EQ(code_of([] { type_hnf(T("(\\x. x) y")); }), "NotHNF");
}

TEST(R0Reduce, TypedRedexLosesThreeJudgments) {
  const Term t = T("(\\x. x) (u v)");
  auto d = synthesize_r0(t, 10);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(size(*d), 5u);
  const R0Derivation r = subject_reduce_r0(*d, {});
  EXPECT_TRUE(check_r0(r).ok);
  EXPECT_EQ(size(r), 2u);
  EXPECT_EQ(to_string(conclusion(r)), to_string(conclusion(*d)));
}

TEST(R0Reduce, UntypedRedexKeepsTheTree) {
  const R0Derivation d = type_hnf(T("x ((\\y. y) z)"));
  const R0Derivation r = subject_reduce_r0(d, P("2"));
  EXPECT_TRUE(check_r0(r).ok);
  EXPECT_TRUE(term_equal(r.term, T("x z")));
  EXPECT_EQ(oracle::r0_shape(r.root), oracle::r0_shape(d.root));
}

TEST(R0Reduce, InvalidStep) {
  const R0Derivation d = type_hnf(T("x y"));
  EXPECT_EQ(code_of([&] { subject_reduce_r0(d, {}); }), "InvalidStep");
}

TEST(R0Reduce, PermutationSelectsTheMatching) {
  const Term yzz = T("y z z");
  const R0Type f = r0_arrow({o()}, r0_arrow({o()}, o()));
  const R0Derivation d{yzz, r0_app(yzz, {}, r0_app(yzz, P("1"), r0_ax(yzz, P("11"), f), {r0_ax(yzz, P("12"), o())}),
                                   {r0_ax(yzz, P("2"), o())})};
  ASSERT_TRUE(check_r0(d).ok);
  const R0Derivation e = subject_expand_r0(d, {}, T("(\\x. y x x) z"));
  ASSERT_TRUE(check_r0(e).ok);
  for (const std::vector<std::size_t>& perm : {std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{1, 0}}) {
    const R0Derivation r = subject_reduce_r0(e, {}, perm);
    EXPECT_TRUE(check_r0(r).ok);
    EXPECT_EQ(oracle::r0_shape(r.root), oracle::r0_shape(d.root));
  }
}

TEST(R0Reduce, WeightedSubjectReductionProperty) {
  const auto corpus = gen::r0_corpus(31, 100);
  ASSERT_GE(corpus.size(), 100u);
  std::size_t identities = 0;
  for (const auto& [ast, d0] : corpus) {
    R0Derivation d = d0;
    oracle::AstPtr cur = ast;
    for (int step = 0; step < 20; ++step) {
      auto b = oracle::head_redex(cur);
      if (!b) break;
      const auto redex = node_at(d.root, *b);
      ASSERT_TRUE(redex) << "head redex untyped in " << oracle::print(cur);
      const std::size_t before = oracle::r0_count(d.root);
      const R0Derivation r = subject_reduce_r0(d, *b);
      ASSERT_TRUE(check_r0(r).ok) << oracle::print(cur);
      const std::size_t after = oracle::r0_count(r.root);
      EXPECT_LT(after, before);
      // Arguments of the contracted application are the Phi_i, one per axiom of x.
      const std::size_t I = redex->kids.size() - 1;
      EXPECT_EQ(after, before - 2 - I);
      ++identities;
      EXPECT_TRUE(equal(conclusion(r).ctx, conclusion(d).ctx));
      EXPECT_TRUE(equal(conclusion(r).type, conclusion(d).type));
      cur = oracle::beta_at(cur, *b);
      EXPECT_TRUE(term_equal(r.term, parse_term(oracle::print(cur))));
      d = r;
    }
  }
  EXPECT_GE(identities, 30u);
}

TEST(R0Expand, IdentityApplication) {
  const R0Type A = r0_arrow({o()}, o());
  const R0Derivation d = identity_typed(A);
  const R0Derivation e = subject_expand_r0(d, {}, T("(\\x. x) (\\x. x)"));
  EXPECT_TRUE(check_r0(e).ok);
  EXPECT_EQ(to_string(conclusion(e)), to_string(conclusion(d)));
  EXPECT_EQ(to_string(conclusion(e).type), "[[o] -> o] -> [o] -> o");
}

TEST(R0Expand, ErasingRedex) {
  const Term y = T("y");
  const R0Derivation d{y, r0_ax(y, {}, o())};
  const R0Derivation e = subject_expand_r0(d, {}, T("(\\x. y) ((\\x. x x) (\\x. x x))"));
  EXPECT_TRUE(check_r0(e).ok);
  EXPECT_EQ(size(e), 3u);
  EXPECT_EQ(typed_positions(e), (std::set<Position>{P("e"), P("1"), P("10")}));
  EXPECT_EQ(code_of([&] { subject_expand_r0(d, {}, T("(\\x. x) z")); }), "InvalidStep");
}

TEST(R0Expand, ReduceThenExpandKeepsTheConclusion) {
  const auto corpus = gen::r0_corpus(32, 50);
  ASSERT_GE(corpus.size(), 50u);
  for (const auto& [ast, d] : corpus) {
    const auto b = *oracle::head_redex(ast);
    const R0Derivation r = subject_reduce_r0(d, b);
    const R0Derivation e = subject_expand_r0(r, b, d.term);
    EXPECT_TRUE(check_r0(e).ok);
    EXPECT_EQ(to_string(conclusion(e)), to_string(conclusion(d)));
  }
}

TEST(R0TypedPositions, Examples) {
  const R0Derivation a = type_hnf(T("x (y z)"));
  EXPECT_EQ(typed_positions(a), (std::set<Position>{P("e"), P("1")}));
  const Term x = T("x");
  EXPECT_EQ(typed_positions({x, r0_ax(x, {}, o())}), std::set<Position>{P("e")});
  const R0Derivation p3 = build_pi_prime_n(3);
  for (const auto& b : typed_positions(p3)) {
    EXPECT_LE(applicative_depth(b), 2u);
    EXPECT_LT(applicative_depth(b), size(p3));
  }
}

TEST(R0TypedPositions, DepthBelowSizeProperty) {
  for (const auto& [ast, d] : gen::r0_corpus(33, 60))
    for (const auto& b : typed_positions(d)) EXPECT_LT(applicative_depth(b), size(d));
}

TEST(R0Substitute, Examples) {
  const R0Derivation a = type_hnf(T("x (y z)"));
  const R0Derivation b = subject_substitute(a, T("x ((\\x. x x) (\\x. x x))"));
  EXPECT_TRUE(check_r0(b).ok);
  EXPECT_EQ(size(b), size(a));
  EXPECT_EQ(typed_positions(b), typed_positions(a));
  EXPECT_EQ(code_of([&] { subject_substitute(a, T("y (y z)")); }), "SubjectMismatch");
  const R0Derivation same = subject_substitute(a, a.term);
  EXPECT_EQ(oracle::r0_shape(same.root), oracle::r0_shape(a.root));
  for (std::size_t n = 1; n <= 4; ++n) {
    const R0Derivation p = build_pi_prime_n(n);
    Term u = cu_f();
    for (std::size_t k = 0; k < n + 1; ++k) u = parse_term("f (" + print_term(u) + ")");
    const R0Derivation s = subject_substitute(p, u);
    EXPECT_TRUE(check_r0(s).ok) << n;
    EXPECT_EQ(to_string(conclusion(s)), to_string(conclusion(p)));
  }
}

TEST(R0Unforgetful, Examples) {
  EXPECT_TRUE(is_unforgetful_r0(conclusion(identity_typed(o()))));
  EXPECT_FALSE(is_unforgetful_r0(conclusion(type_hnf(T("x ((\\x. x x) (\\x. x x))")))));
  // [] heads the domain, a negative occurrence, which the definition allows.
  EXPECT_TRUE(is_unforgetful_r0(R0Judgment{{}, r0_arrow({}, o())}));
  EXPECT_FALSE(is_unforgetful_r0(R0Judgment{{}, r0_arrow({r0_arrow({}, o())}, o())}));
}

TEST(R0Unforgetful, AgreesWithPolarityOracle) {
  for (const auto& [ast, d] : gen::r0_corpus(34, 60)) {
    const auto j = conclusion(d);
    EXPECT_EQ(is_unforgetful_r0(j), oracle::unforgetful(j)) << to_string(j);
  }
}

TEST(R0Infinitary, PiThreeAlongCuF) {
  const R0Derivation p3 = build_pi_prime_n(3);
  const InfinitaryExpansion e = infinitary_expand_r0(p3, cu_f_path(12));
  EXPECT_TRUE(check_r0(e.derivation, cu_f()).ok);
  EXPECT_TRUE(equal(conclusion(e.derivation).ctx, oracle::gamma(3)));
  // Least N after which every step is deeper than the size (6).
  EXPECT_EQ(e.n, 7u);
  const InfinitaryExpansion one = infinitary_expand_r0(build_pi_prime_n(1), cu_f_path(2));
  EXPECT_TRUE(check_r0(one.derivation, cu_f()).ok);
  EXPECT_EQ(to_string(conclusion(one.derivation)), "f:[[] -> o] |- o");
  EXPECT_EQ(code_of([&] { infinitary_expand_r0(p3, cu_f_path(2)); }), "PathTooShort");
}

TEST(R0Infinitary, EmptyPathIsIdentity) {
  const R0Derivation d = type_hnf(T("\\x. x y"));
  const InfinitaryExpansion e = infinitary_expand_r0(d, run_path(d.term, Strategy::HH, 5));
  EXPECT_EQ(e.n, 0u);
  EXPECT_EQ(oracle::r0_shape(e.derivation.root), oracle::r0_shape(d.root));
}

TEST(R0Synthesis, HeadNormalizationCorpus) {
  const std::vector<std::pair<const char*, bool>> corpus{
      {"\\x. x", true},
      {"\\x. x x", true},
      {"(\\x. x x) (\\x. x x)", false},
      {"(\\x. f (x x)) (\\x. f (x x))", true},
      {"x ((\\x. x x) (\\x. x x))", true},
      {"(\\x. y) ((\\x. x x) (\\x. x x))", true},
      {"(\\x. x x) (\\x. x)", true},
  };
  for (const auto& [s, typable] : corpus) {
    const Term t = T(s);
    const Path p = run_path(t, Strategy::Head, 200);
    const bool halts = p.status == PathStatus::HeadNormalForm || p.status == PathStatus::NormalForm;
    EXPECT_EQ(halts, typable) << s;
    auto d = synthesize_r0(t, 200);
    EXPECT_EQ(d.has_value(), typable) << s;
    if (d) EXPECT_TRUE(check_r0(*d, t).ok) << s;
  }
}

TEST(R0Synthesis, ExhaustiveSearch) {
  EXPECT_FALSE(r0_derivation_exists(omega(), 6));
  EXPECT_TRUE(r0_derivation_exists(T("\\x. x"), 2));
  EXPECT_FALSE(r0_derivation_exists(T("\\x. x"), 1));
  EXPECT_TRUE(r0_derivation_exists(cu_f(), 4));
}
