// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include "nidt/errors.hpp"
#include "nidt/position.hpp"
#include "nidt/syntax.hpp"
#include "nidt/term.hpp"
#include "support/oracles.hpp"

using namespace nidt;

namespace {

Position P(const char* s) { return parse_position(s); }

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DomainError& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST(Position, ApplicativeDepth) {
  EXPECT_EQ(applicative_depth({}), 0u);
  EXPECT_EQ(applicative_depth(P("01212")), 2u);
  EXPECT_EQ(applicative_depth(Position(9, 1)), 0u);
  EXPECT_EQ(applicative_depth(P("2.3.0.1")), 2u);
}

TEST(Position, Collapse) {
  EXPECT_EQ(collapse(P("2.3.0.1")), P("2201"));
  EXPECT_EQ(collapse({}), Position{});
  EXPECT_EQ(collapse(P("7")), P("2"));
}

TEST(Position, Rank) {
  EXPECT_EQ(rank(P("00000022222")), 5u);
  EXPECT_EQ(rank(P("2.8.3")), 8u);
  EXPECT_EQ(rank({}), 0u);
}

TEST(Position, TextRoundTrip) {
  for (const char* s : {"e", "0", "0122", "2.13.0", "111"}) EXPECT_EQ(to_string(P(s)), std::string(s));
  EXPECT_EQ(to_string(P("2.3.4")), "234");
}

TEST(Position, CollapseIsIdempotentAndMonotone) {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    Position a;
    const int len = static_cast<int>(rng() % 7);
    for (int j = 0; j < len; ++j) a.push_back(rng() % 9);
    Position b = a;
    for (int j = static_cast<int>(rng() % 3); j > 0; --j) b.push_back(rng() % 9);
    EXPECT_EQ(collapse(collapse(a)), collapse(a));
    EXPECT_TRUE(is_prefix(collapse(a), collapse(b)));
  }
}

TEST(TermCore, SupportOfLambdaApplication) {
  EXPECT_EQ(support_to_depth(parse_term("\\x. x y"), 1), (std::set<Position>{P("e"), P("0"), P("01"), P("02")}));
  for (std::size_t d : {0u, 3u}) EXPECT_EQ(support_to_depth(parse_term("x"), d), std::set<Position>{P("e")});
}

TEST(TermCore, SupportOfFInfFollowsPostCondition) {
  // Every position with applicative depth <= 2, which includes 221.
  const std::set<Position> want{P("e"), P("1"), P("2"), P("21"), P("22"), P("221")};
  EXPECT_EQ(support_to_depth(parse_term("fix X. f X"), 2), want);
}

TEST(TermCore, SupportIsMonotoneAndDepthBounded) {
  oracle::TermGen gen(11);
  for (int i = 0; i < 60; ++i) {
    const Term t = parse_term(oracle::print(gen.term(5)));
    for (std::size_t d = 0; d < 4; ++d) {
      const auto s = support_to_depth(t, d);
      const auto s1 = support_to_depth(t, d + 1);
      for (const auto& b : s) {
        EXPECT_LE(applicative_depth(b), d);
        EXPECT_TRUE(s1.count(b));
      }
    }
  }
}

TEST(TermCore, SupportMatchesNamedOracleOnFiniteTerms) {
  oracle::TermGen gen(12);
  for (int i = 0; i < 80; ++i) {
    const auto ast = gen.term(5);
    EXPECT_EQ(support_to_depth(parse_term(oracle::print(ast)), 64), oracle::support(ast));
  }
}

TEST(TermCore, Is001) {
  EXPECT_TRUE(is_001(parse_term("fix X. f X")));
  EXPECT_FALSE(is_001(parse_term("fix X. X x")));
  EXPECT_TRUE(is_001(parse_term("(\\x. x x) (\\x. x x)")));
  EXPECT_EQ(code_of([] { support_to_depth(parse_term("fix X. X x"), 2); }), "Non001Term");
}

TEST(TermCore, Substitute) {
  EXPECT_TRUE(term_equal(substitute(parse_term("x y"), "x", parse_term("z")), parse_term("z y")));
  const Term s = substitute(parse_term("\\y. x"), "x", parse_term("y"));
  EXPECT_TRUE(term_equal(s, parse_term("\\w. y")));
  EXPECT_FALSE(term_equal(s, parse_term("\\y. y")));
  const Term delta = parse_term("\\x. x x");
  EXPECT_TRUE(term_equal(substitute(parse_term("x x"), "x", delta), parse_term("(\\x. x x) (\\x. x x)")));
}

TEST(TermCore, SubstituteMatchesNamedOracle) {
  oracle::TermGen gen(13);
  for (int i = 0; i < 100; ++i) {
    const auto t = gen.term(4);
    const auto u = gen.term(3);
    const Term got = substitute(parse_term(oracle::print(t)), "y", parse_term(oracle::print(u)));
    EXPECT_TRUE(term_equal(got, parse_term(oracle::print(oracle::subst(t, "y", u)))))
        << oracle::print(t) << " [" << oracle::print(u) << "/y]";
  }
}

TEST(TermCore, SubstituteInRegularTermsAgreesOnUnfoldings) {
  const Term t = parse_term("fix X. y X");
  const Term u = parse_term("\\z. z");
  const Term s = substitute(t, "y", u);
  EXPECT_TRUE(term_equal(s, parse_term("fix X. (\\z. z) X")));
  EXPECT_EQ(support_to_depth(s, 3), support_to_depth(parse_term("fix X. (\\z. z) X"), 3));
}

TEST(TermCore, TermEqual) {
  EXPECT_TRUE(term_equal(parse_term("fix X. f X"), parse_term("f (fix X. f X)")));
  EXPECT_FALSE(term_equal(parse_term("\\x. x x"), parse_term("\\x. f (x x)")));
  EXPECT_TRUE(term_equal(parse_term("\\x. x"), parse_term("\\y. y")));
}

TEST(TermCore, TermEqualIsAnEquivalence) {
  oracle::TermGen gen(14);
  std::vector<Term> pool;
  for (int i = 0; i < 30; ++i) pool.push_back(parse_term(oracle::print(gen.term(3))));
  pool.push_back(parse_term("fix X. f X"));
  pool.push_back(parse_term("f (f (fix X. f X))"));
  for (const auto& a : pool) {
    EXPECT_TRUE(term_equal(a, a));
    for (const auto& b : pool) {
      EXPECT_EQ(term_equal(a, b), term_equal(b, a));
      EXPECT_EQ(term_equal(a, b), canonical_form(a) == canonical_form(b));
      for (const auto& c : pool)
        if (term_equal(a, b) && term_equal(b, c)) EXPECT_TRUE(term_equal(a, c));
    }
  }
}

TEST(Syntax, PrintParseRoundTrip) {
  oracle::TermGen gen(15);
  for (int i = 0; i < 100; ++i) {
    const Term t = parse_term(oracle::print(gen.term(5)));
    const std::string s = print_term(t);
    EXPECT_TRUE(term_equal(parse_term(s), t)) << s;
    EXPECT_EQ(print_term(parse_term(s)), s);
  }
  for (const char* s : {"fix X. f X", "(\\x. f (x x)) (\\x. f (x x))", "fix X. \\z. y (X z)"}) {
    const Term t = parse_term(s);
    EXPECT_TRUE(term_equal(parse_term(print_term(t)), t)) << s;
  }
}

TEST(Syntax, Errors) {
  EXPECT_EQ(code_of([] { parse_term("\\x. "); }), "SyntaxError");
  EXPECT_EQ(code_of([] { parse_term("(x y"); }), "SyntaxError");
  EXPECT_EQ(code_of([] { parse_term("fix X. X"); }), "SyntaxError");
  try {
    parse_term("x )");
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("1:"), std::string::npos);
  }
}

TEST(TermCore, WalkAcceptsTrackLetters) {
  const Term t = parse_term("f (g y)");
  ASSERT_TRUE(t.walk(P("2.1")).has_value());
  EXPECT_EQ(t.walk(P("7.1")), t.walk(P("21")));
  EXPECT_FALSE(t.walk(P("0")).has_value());
}
