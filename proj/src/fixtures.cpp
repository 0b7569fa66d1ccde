// SPDX-License-Identifier: MIT
#include "nidt/fixtures.hpp"

#include "nidt/errors.hpp"
#include "nidt/json_io.hpp"
#include "nidt/syntax.hpp"

namespace nidt {

namespace {

std::size_t path_len(std::size_t n) { return 2 * n + 6; }

SType fo_type() { return s_arrow(make_seq({{2, s_var("o")}}), s_var("o")); }

Position twos(std::size_t m) { return Position(m, 2); }

// Prefix of f^inf typed with (2.o) -> o everywhere; track(m) is the axiom track
// at 2^m.1 and ctx(m) the context at 2^m.
template <class TrackAt, class CtxAt>
Prefix f_prefix(std::size_t rank, TrackAt track, CtxAt ctx) {
  Prefix p;
  p.derivation.term = f_inf();
  const SType o = s_var("o");
  const SType s = fo_type();
  for (std::size_t m = 0; m <= rank; ++m) {
    SJudgment app;
    app.rule = Rule::App;
    app.type = o;
    app.ctx[free_key("f")] = ctx(m);
    p.derivation.nodes[twos(m)] = app;
    SJudgment ax;
    ax.rule = Rule::Ax;
    ax.type = s;
    ax.track = track(m);
    ax.ctx[free_key("f")] = make_seq({{ax.track, s}});
    p.derivation.nodes[concat(twos(m), {1})] = ax;
  }
  p.open.insert(twos(rank));
  return p;
}

}  // namespace

Term f_inf() { return parse_term("fix X. f X"); }
Term cu_f() { return parse_term("(\\x. f (x x)) (\\x. f (x x))"); }
Term omega() { return parse_term("(\\x. x x) (\\x. x x)"); }
Path cu_f_path(std::size_t steps) { return run_path(cu_f(), Strategy::HH, steps); }

SDerivation p_ex() {
  const Term t = parse_term("\\x. x x");
  const SType o = s_var("o"), o2 = s_var("o'");
  const SType s = s_arrow(make_seq({{8, o}, {3, o2}, {2, o}}), o2);
  return derive_s(t, {{}, {0}, {0, 1}, {0, 8}, {0, 3}, {0, 2}},
                  {{{0, 1}, {s, 4}}, {{0, 8}, {o, 5}}, {{0, 3}, {o2, 2}}, {{0, 2}, {o, 9}}});
}

R0Derivation pi_prime(std::size_t n) { return build_pi_prime_n(n); }
SDerivation pi_prime_s(std::size_t n) { return lift_r0_to_s(pi_prime(n)); }
R0Derivation pi_r0(std::size_t n) { return infinitary_expand_r0(pi_prime(n), cu_f_path(path_len(n))).derivation; }
SDerivation pi_s(std::size_t n) { return expand_member(pi_prime_s(n), cu_f_path(path_len(n))).derivation; }

SDerivation p_n_finf(std::size_t n) { return rank_truncate(unforgetful_nf_typing(f_inf()), n); }

SDerivation identity_redex() {
  const SType o = s_var("o");
  return derive_s(parse_term("(\\x. x) y"), {{}, {1}, {1, 0}, {2}}, {{{1, 0}, {o, 2}}, {{2}, {o, 2}}});
}

Prefix p_prime_prefix(std::size_t rank) {
  return f_prefix(
      rank, [](std::size_t m) { return static_cast<Track>(m + 2); },
      [](std::size_t m) { return make_cofinite({}, static_cast<Track>(m + 2), fo_type()); });
}

Prefix tilde_p_prime_prefix(std::size_t rank) {
  return f_prefix(
      rank, [](std::size_t m) { return static_cast<Track>(m == 0 ? 2 : m + 3); },
      [](std::size_t m) {
        if (m == 0) return make_cofinite({}, 2, fo_type());
        return make_cofinite({{3, fo_type()}}, static_cast<Track>(m + 3), fo_type());
      });
}

SType omega_rho() { return parse_s_type("mu X. (k>=2:X) -> o"); }

Term root_approx_term() {
  return parse_term("(\\x. \\z. y (x x z)) (\\x. \\z. y (x x z)) ((\\x. x x) (\\x. x x))");
}

Path root_approx_path(std::size_t steps) { return run_path(root_approx_term(), Strategy::HH, steps); }

RankFamily root_approx_family() {
  NFGenerator g = unforgetful_nf_typing(parse_term("fix X. y X"));
  RankFamily f;
  f.max_rank = 8;
  f.member = [g](std::size_t n) {
    return expand_member(rank_truncate(g, n), root_approx_path(3 * n + 8)).derivation;
  };
  return f;
}

std::vector<FixtureFile> all_fixtures() {
  std::vector<FixtureFile> out;
  auto term_file = [&](const std::string& name, const Term& t) { out.push_back({name, print_term(t) + "\n"}); };
  term_file("f_inf.lam", f_inf());
  term_file("cu_f.lam", cu_f());
  term_file("omega.lam", omega());
  term_file("root_approx.lam", root_approx_term());
  out.push_back({"omega_rho.type", to_string(omega_rho()) + "\n"});
  out.push_back({"cu_f_path.json", dump(path_to_json(cu_f_path(8)))});
  out.push_back({"p_ex.json", dump(s_to_json(p_ex()))});
  out.push_back({"identity_redex.json", dump(s_to_json(identity_redex()))});
  for (std::size_t n : {1, 3}) out.push_back({"pi_prime_" + std::to_string(n) + ".json", dump(r0_to_json(pi_prime(n)))});
  out.push_back({"pi_prime_3_s.json", dump(s_to_json(pi_prime_s(3)))});
  out.push_back({"pi_3.json", dump(r0_to_json(pi_r0(3)))});
  out.push_back({"pi_3_s.json", dump(s_to_json(pi_s(3)))});
  for (std::size_t n : {1, 2, 3}) out.push_back({"p_" + std::to_string(n) + "_finf.json", dump(s_to_json(p_n_finf(n)))});
  Prefix q = p_prime_prefix(5);
  out.push_back({"p_prime_rank5.json", dump(s_to_json(q.derivation, q.open))});
  Prefix tq = tilde_p_prime_prefix(5);
  out.push_back({"tilde_p_prime_rank5.json", dump(s_to_json(tq.derivation, tq.open))});
  return out;
}

}  // namespace nidt
