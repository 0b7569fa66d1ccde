// SPDX-License-Identifier: MIT
#pragma once

#include <set>
#include <string>
#include <vector>

#include "nidt/approx.hpp"
#include "nidt/nf.hpp"
#include "nidt/r0.hpp"
#include "nidt/sderiv.hpp"

namespace nidt {

Term f_inf();         // fix X. f X
Term cu_f();          // (\x. f (x x)) (\x. f (x x))
Term omega();         // (\x. x x) (\x. x x)
Path cu_f_path(std::size_t steps);  // hereditary head path towards f^inf

// S-derivation of \x. x x with x:(2.o', 4.S, 5.o, 9.o), S = (8.o, 3.o', 2.o) -> o'.
SDerivation p_ex();

// R0 Pi'_n and its canonical lift; Pi_n, the expansion of Pi'_n along the cu_f path.
R0Derivation pi_prime(std::size_t n);
SDerivation pi_prime_s(std::size_t n);
R0Derivation pi_r0(std::size_t n);
SDerivation pi_s(std::size_t n);

// Rank-n truncation of the unforgetful typing of f^inf.
SDerivation p_n_finf(std::size_t n);

// (\x. x) y typed with o, argument on track 2.
SDerivation identity_redex();

// Finite prefix of an infinite derivation: `open` nodes keep their judgment but
// lose premises beyond the cut.
struct Prefix {
  SDerivation derivation;
  std::set<Position> open;
};
// Quantitative and non-quantitative representatives of f^inf typed with all
// (2.o) -> o, cut after rank `rank`. The second keeps track 3 unconsumed.
Prefix p_prime_prefix(std::size_t rank);
Prefix tilde_p_prime_prefix(std::size_t rank);

// rho = (k.rho)_{k>=2} -> o, typing both copies of \x. x x in Omega.
SType omega_rho();

// (\x.\z. y (x x z)) (\x.\z. y (x x z)) Omega and its hereditary head path.
Term root_approx_term();
Path root_approx_path(std::size_t steps);
// Members with Omega untyped: rank-n truncations of the y^inf typing expanded
// along the path.
RankFamily root_approx_family();

struct FixtureFile {
  std::string name;
  std::string content;
};
// Every committed fixture, serialized deterministically.
std::vector<FixtureFile> all_fixtures();

}  // namespace nidt
