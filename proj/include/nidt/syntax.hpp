// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <string_view>

#include "nidt/term.hpp"

namespace nidt {

// t ::= x | \x. t | t t | (t) | fix X. t | X   (also accepts "λ" and "\x y. t")
// Throws DomainError("SyntaxError") with line/column, or "NonRegularBinding".
Term parse_term(std::string_view text);

// Emits the same grammar; back-edges become `fix`. Throws "UnprintableTerm" when a
// cycle cannot be expressed with named recursion variables.
std::string print_term(const Term& t);

}  // namespace nidt
