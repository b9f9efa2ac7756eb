#ifndef CHRONICLE_EQUIVALENCE_HPP
#define CHRONICLE_EQUIVALENCE_HPP

#include <string>
#include <utility>
#include <vector>

#include "chronicle/dfa.hpp"

namespace chronicle {

/// Outcome of a language-equivalence check between two DFAs.
///
/// On success, `relation` is a bisimulation containing the initial pair:
/// related states agree on acceptance and stay related under every event.
/// On failure, `counterexample` is the lexicographically-least among the
/// shortest words accepted by exactly one automaton.
struct BisimWitness {
    bool equivalent = false;
    std::vector<std::pair<int, int>> relation;      // pairs (q in d1, q' in d2)
    std::vector<std::string> counterexample;        // event names
};

// Hopcroft–Karp-style pair exploration from the initial pair.
// Requires identical alphabets.
BisimWitness language_equivalent(const Dfa& d1, const Dfa& d2);

}  // namespace chronicle

#endif
