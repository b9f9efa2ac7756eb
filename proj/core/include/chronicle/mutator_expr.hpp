#ifndef CHRONICLE_MUTATOR_EXPR_HPP
#define CHRONICLE_MUTATOR_EXPR_HPP

#include <map>
#include <string>

#include "chronicle/dfa.hpp"

namespace chronicle {

// Evaluates a specification-mutator expression bottom-up. Grammar:
//
//   expr := name
//         | MS(expr)                      supersequence closure
//         | MI(expr, expr)                intersection
//         | ML(expr, int)                 Levenshtein tolerance
//         | MG(expr, event, event, int)   at-least-k good shots
//
// Names resolve in `env`. The result is minimized. Throws ParseError with
// a character position on malformed input.
Dfa parse_mutator_expression(const std::string& text,
                             const std::map<std::string, Dfa>& env);

}  // namespace chronicle

#endif
