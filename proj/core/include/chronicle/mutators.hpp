#ifndef CHRONICLE_MUTATORS_HPP
#define CHRONICLE_MUTATORS_HPP

#include <string>

#include "chronicle/dfa.hpp"

namespace chronicle {

// Language mutators over specification DFAs. Every mutator determinizes and
// minimizes its result, so outputs are canonical up to isomorphism; expected
// recording time depends only on the language, so this is lossless.

// L(result) = { w | some w' in L(dfa) is a subsequence of w }.
Dfa mutate_supersequence(const Dfa& dfa);

// L(result) = L(d1) ∩ L(d2). Requires identical alphabets.
Dfa mutate_intersection(const Dfa& d1, const Dfa& d2);

// L(result) = { w | some w' in L(dfa) has unit-cost Levenshtein distance
// ≤ max_edits from w }.
Dfa mutate_levenshtein(const Dfa& dfa, int max_edits);

// At-least-k-good-shots: accepts words of L(dfa) in which at least
// `min_shots` occurrences of `event` have been replaced by `better_event`,
// built as min_shots+1 stacked copies of the automaton. The literal level
// construction offers no substitution edges at the top level; `saturating`
// adds them there, accepting words with more than `min_shots` substitutions.
Dfa mutate_good_shots(const Dfa& dfa, const std::string& event,
                      const std::string& better_event, int min_shots,
                      bool saturating = false);

}  // namespace chronicle

#endif
