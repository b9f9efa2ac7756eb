#ifndef CHRONICLE_DFA_HPP
#define CHRONICLE_DFA_HPP

#include <span>
#include <string>
#include <vector>

namespace chronicle {

// A word over an automaton alphabet, as symbol indices.
using Word = std::vector<int>;

/// Deterministic finite automaton with a total transition function.
///
/// The alphabet is canonicalized to sorted order on construction, so two
/// automata share an alphabet iff their sorted event-name lists are equal.
/// Values are immutable after construction.
class Dfa {
  public:
    // `delta` is row-major: delta[q * |alphabet| + e]. Must be total.
    Dfa(std::vector<std::string> alphabet, int num_states, int initial,
        std::vector<bool> accepting, std::vector<int> delta,
        std::vector<std::string> state_names = {});

    // Builds from a named transition list; missing (state, event) pairs are
    // routed to a fresh non-accepting sink so the result is total.
    static Dfa from_transitions(
        std::vector<std::string> alphabet,
        const std::vector<std::string>& state_names,
        const std::string& initial,
        const std::vector<std::string>& accepting,
        const std::vector<std::tuple<std::string, std::string, std::string>>&
            transitions);

    int num_states() const { return num_states_; }
    int num_symbols() const { return static_cast<int>(alphabet_.size()); }
    int initial() const { return initial_; }
    bool is_accepting(int q) const { return accepting_[q]; }
    const std::vector<std::string>& alphabet() const { return alphabet_; }
    const std::string& state_name(int q) const { return state_names_[q]; }
    const std::vector<std::string>& state_names() const { return state_names_; }

    // Throws ValidationError for a symbol outside the alphabet.
    int symbol_index(const std::string& event) const;

    int step(int q, int e) const { return delta_[q * alphabet_.size() + e]; }

    // delta* folded from the initial state.
    int run(std::span<const int> word) const;
    int run(const std::vector<std::string>& word) const;

    bool accepts(std::span<const int> word) const;
    bool accepts(const std::vector<std::string>& word) const;

    Word to_indices(const std::vector<std::string>& word) const;

  private:
    std::vector<std::string> alphabet_;
    int num_states_;
    int initial_;
    std::vector<bool> accepting_;
    std::vector<int> delta_;
    std::vector<std::string> state_names_;
};

/// Nondeterministic finite automaton (no epsilon transitions; constructions
/// that need them close over epsilon while building).
struct Nfa {
    std::vector<std::string> alphabet;  // sorted
    int num_states = 0;
    std::vector<int> initial;
    std::vector<bool> accepting;
    // transitions[q * |alphabet| + e] = target states
    std::vector<std::vector<int>> transitions;

    void check() const;  // throws ValidationError on malformed shape
};

Nfa nfa_view(const Dfa& dfa);

// Subset construction. Language-preserving; the empty subset acts as sink,
// so the result is total.
Dfa determinize(const Nfa& nfa);

// Unreachable-state pruning followed by Moore partition refinement.
// Language-preserving and idempotent up to isomorphism.
Dfa minimize(const Dfa& dfa);

}  // namespace chronicle

#endif
