// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include "nidt/errors.hpp"
#include "nidt/fixtures.hpp"
#include "nidt/reduction.hpp"
#include "nidt/syntax.hpp"
#include "support/oracles.hpp"

using namespace nidt;

namespace {

Position P(const char* s) { return parse_position(s); }
Term T(const char* s) { return parse_term(s); }

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DomainError& e) {
    return e.code();
  }
  return "";
}

Term f_power(std::size_t n, const std::string& inner) {
  std::string s = inner;
  for (std::size_t i = 0; i < n; ++i) s = "f (" + s + ")";
  return parse_term(s);
}

const char* kCuF = "(\\x. f (x x)) (\\x. f (x x))";

BohmPrefix var(const std::string& x) { return {BohmPrefix::Kind::Var, x, false, {}}; }
BohmPrefix app(BohmPrefix a, BohmPrefix b) { return {BohmPrefix::Kind::App, "", false, {std::move(a), std::move(b)}}; }

}  // namespace

TEST(Reduction, ReduceAt) {
  EXPECT_TRUE(term_equal(reduce_at(T("\\y. ((\\x. x) u) v"), P("01")), T("\\y. u v")));
  const Term omega = T("(\\x. x x) (\\x. x x)");
  EXPECT_TRUE(term_equal(reduce_at(omega, {}), omega));
  EXPECT_TRUE(term_equal(reduce_at(T(kCuF), {}), T("f ((\\x. f (x x)) (\\x. f (x x)))")));
  EXPECT_EQ(code_of([] { reduce_at(T("x y"), {}); }), "NotARedex");
  EXPECT_EQ(code_of([] { reduce_at(T("x y"), P("22")); }), "PositionOutOfSupport");
}

TEST(Reduction, ReduceAtMatchesNamedOracle) {
  oracle::TermGen gen(21);
  int checked = 0;
  while (checked < 150) {
    const auto ast = gen.term(5);
    for (const auto& b : oracle::redexes(ast)) {
      const Term got = reduce_at(parse_term(oracle::print(ast)), b);
      const auto want = oracle::beta_at(ast, b);
      ASSERT_TRUE(term_equal(got, parse_term(oracle::print(want)))) << oracle::print(ast) << " at " << to_string(b);
      EXPECT_TRUE(is_001(got));
      ++checked;
    }
  }
}

TEST(Reduction, HeadStep) {
  auto r = head_step(T(kCuF));
  ASSERT_TRUE(std::holds_alternative<Term>(r));
  EXPECT_TRUE(term_equal(std::get<Term>(r), f_power(1, kCuF)));
  auto h = head_step(T("\\x. x y"));
  ASSERT_TRUE(std::holds_alternative<HeadNormal>(h));
  const auto hn = std::get<HeadNormal>(h);
  EXPECT_EQ(hn.p, 1u);
  EXPECT_TRUE(hn.head_bound);
  EXPECT_EQ(hn.q, 1u);
  const Term i_iy = T("(\\x. x) ((\\x. x) y)");
  auto s = head_step(i_iy);
  ASSERT_TRUE(std::holds_alternative<Term>(s));
  EXPECT_TRUE(term_equal(std::get<Term>(s), reduce_at(i_iy, {})));
  EXPECT_EQ(code_of([] { head_step(T("fix X. X x")); }), "Headless");
}

TEST(Reduction, Adr) {
  EXPECT_EQ(adr(T("x ((\\z. z) (\\z. z)) ((\\x. x x) (\\x. x x))")), std::optional<std::size_t>(1));
  EXPECT_EQ(adr(T("\\x. x (\\y. y x)")), std::nullopt);
  EXPECT_EQ(adr(T("fix X. f X")), std::nullopt);
  EXPECT_EQ(adr(f_power(3, kCuF)), std::optional<std::size_t>(3));
}

TEST(Reduction, HhParallelStep) {
  const Term t = T("x ((\\z. z) (\\z. z)) ((\\z. z) (\\z. z)) (x ((\\z. z) x))");
  EXPECT_TRUE(term_equal(hh_parallel_step(t), T("x (\\z. z) (\\z. z) (x ((\\z. z) x))")));
  EXPECT_TRUE(term_equal(hh_parallel_step(T(kCuF)), f_power(1, kCuF)));
  // Only the depth-0 redex has minimal depth.
  const Term iy2 = T("((\\x. x) y) ((\\x. x) y)");
  EXPECT_TRUE(term_equal(hh_parallel_step(iy2), reduce_at(iy2, P("1"))));
  EXPECT_EQ(code_of([] { hh_parallel_step(T("x")); }), "AlreadyNormal");
}

TEST(Reduction, RunPath) {
  const Path p = run_path(T("(\\x. x x) (\\x. x x)"), Strategy::Head, 5);
  EXPECT_EQ(p.status, PathStatus::Stalled);
  EXPECT_EQ(p.steps.size(), 1u);
  const Path c = run_path(T(kCuF), Strategy::HH, 6);
  EXPECT_EQ(c.status, PathStatus::Productive);
  ASSERT_EQ(c.steps.size(), 6u);
  for (std::size_t n = 0; n < 6; ++n) {
    EXPECT_EQ(c.steps[n].depth, n);
    EXPECT_TRUE(term_equal(c.terms[n], f_power(n, kCuF)));
  }
  const Path nf = run_path(T("\\x. x y"), Strategy::Leftmost, 10);
  EXPECT_EQ(nf.status, PathStatus::NormalForm);
  EXPECT_TRUE(nf.steps.empty());
}

TEST(Reduction, LimitPrefix) {
  const Path c = run_path(T(kCuF), Strategy::HH, 4);
  auto l = limit_prefix(c, 2);
  ASSERT_TRUE(l.has_value());
  std::set<Position> got;
  for (const auto& q : prefix_positions(*l)) got.insert(q);
  EXPECT_EQ(got, (std::set<Position>{P("e"), P("1"), P("2"), P("21"), P("22"), P("221")}));
  EXPECT_FALSE(limit_prefix(run_path(T(kCuF), Strategy::HH, 2), 5).has_value());
  const Path n = run_path(T("(\\x. x) (\\y. y)"), Strategy::Head, 10);
  auto ln = limit_prefix(n, 4);
  ASSERT_TRUE(ln.has_value());
  EXPECT_EQ(to_compact(*ln), to_compact(bohm_prefix(T("\\y. y"), 4, 1)));
}

TEST(Reduction, BohmPrefix) {
  const BohmPrefix b = bohm_prefix(T("(\\x. x x) (\\x. x x)"), 3, 10);
  EXPECT_EQ(b.kind, BohmPrefix::Kind::Bottom);
  BohmPrefix want{BohmPrefix::Kind::Unexplored, "", false, {}};
  for (int i = 0; i < 3; ++i) want = app(var("f"), want);
  EXPECT_EQ(bohm_prefix(T(kCuF), 3, 50), want);
  const Term nf = T("\\x. x (\\y. y x) z");
  EXPECT_TRUE(term_equal(parse_term(to_compact(bohm_prefix(nf, 10, 1))), nf));
}

TEST(Reduction, BohmPrefixIsMonotone) {
  const std::vector<Term> corpus{T(kCuF), T("(\\x. x x) (\\x. x x)"), T("x ((\\x. x x) (\\x. x x)) ((\\z. z) y)"),
                                 T("(\\x. \\z. y (x x z)) (\\x. \\z. y (x x z))")};
  for (const auto& t : corpus) {
    for (std::size_t d = 0; d < 5; ++d) {
      const auto small = prefix_positions(bohm_prefix(t, d, 30));
      const auto big = prefix_positions(bohm_prefix(t, d + 1, 30));
      const std::set<Position> bs(big.begin(), big.end());
      for (const auto& q : small) EXPECT_TRUE(bs.count(q));
    }
  }
}

TEST(Reduction, ConfluenceOnNormalizingTerms) {
  oracle::TermGen gen(22);
  int tested = 0;
  for (int i = 0; i < 400 && tested < 60; ++i) {
    const auto ast = gen.term(4);
    if (oracle::node_count(ast) > 12) continue;
    // All maximal reduction sequences, breadth first, bounded.
    std::vector<oracle::AstPtr> frontier{ast};
    std::vector<Term> normals;
    bool bounded = true;
    for (int round = 0; round < 8 && !frontier.empty(); ++round) {
      std::vector<oracle::AstPtr> next;
      for (const auto& t : frontier) {
        const auto rs = oracle::redexes(t);
        if (rs.empty()) {
          normals.push_back(parse_term(oracle::print(t)));
          continue;
        }
        for (const auto& b : rs) next.push_back(oracle::beta_at(t, b));
      }
      if (next.size() > 400) {
        bounded = false;
        break;
      }
      frontier = next;
    }
    if (!bounded || !frontier.empty() || normals.empty()) continue;
    ++tested;
    for (const auto& n : normals) EXPECT_TRUE(term_equal(n, normals.front())) << oracle::print(ast);
    // The library's leftmost strategy reaches the same normal form.
    const Path p = run_path(parse_term(oracle::print(ast)), Strategy::Leftmost, 50);
    ASSERT_EQ(p.status, PathStatus::NormalForm);
    EXPECT_TRUE(term_equal(p.terms.back(), normals.front()));
  }
  EXPECT_GE(tested, 30);
}

TEST(Reduction, HereditaryHeadReachesEveryDepth) {
  Term t = T(kCuF);
  for (std::size_t d = 0; d <= 10; ++d) {
    while (adr(t).value_or(SIZE_MAX) < d) t = hh_parallel_step(t);
    EXPECT_GE(adr(t).value_or(SIZE_MAX), d);
  }
}

TEST(Reduction, LeftmostOnCycleIsUndefined) {
  const Path p = run_path(T("fix X. y X ((\\x. x) z)"), Strategy::Leftmost, 5);
  EXPECT_EQ(p.status, PathStatus::StrategyUndefined);
}
