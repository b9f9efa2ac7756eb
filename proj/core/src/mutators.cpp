#include "chronicle/mutators.hpp"

#include <algorithm>

#include "chronicle/errors.hpp"

namespace chronicle {

Dfa mutate_supersequence(const Dfa& dfa) {
    Nfa nfa = nfa_view(dfa);
    const int m = static_cast<int>(nfa.alphabet.size());
    // A self-loop on every (state, event) lets the NFA skip arbitrary
    // symbols, so it accepts exactly the supersequences.
    for (int q = 0; q < nfa.num_states; ++q)
        for (int e = 0; e < m; ++e) {
            auto& targets = nfa.transitions[q * m + e];
            if (std::find(targets.begin(), targets.end(), q) == targets.end())
                targets.push_back(q);
        }
    return minimize(determinize(nfa));
}

Dfa mutate_intersection(const Dfa& d1, const Dfa& d2) {
    if (d1.alphabet() != d2.alphabet())
        throw ValidationError("intersection requires identical alphabets");
    const int m = d1.num_symbols();
    const int n2 = d2.num_states();
    const int n = d1.num_states() * n2;

    std::vector<int> delta(static_cast<std::size_t>(n) * m);
    std::vector<bool> accepting(n, false);
    for (int q1 = 0; q1 < d1.num_states(); ++q1)
        for (int q2 = 0; q2 < n2; ++q2) {
            int q = q1 * n2 + q2;
            accepting[q] = d1.is_accepting(q1) && d2.is_accepting(q2);
            for (int e = 0; e < m; ++e)
                delta[q * m + e] = d1.step(q1, e) * n2 + d2.step(q2, e);
        }
    return minimize(Dfa(d1.alphabet(), n, d1.initial() * n2 + d2.initial(),
                        std::move(accepting), std::move(delta)));
}

Dfa mutate_levenshtein(const Dfa& dfa, int max_edits) {
    if (max_edits < 0)
        throw ValidationError("levenshtein mutator needs max_edits >= 0");
    const int m = dfa.num_symbols();
    const int budget = max_edits + 1;  // edit counts 0..max_edits
    auto id = [&](int q, int edits) { return q * budget + edits; };

    // Deletion moves consume no input; close over them eagerly so the NFA
    // needs no epsilon transitions.
    auto close = [&](std::vector<int> states) {
        for (std::size_t i = 0; i < states.size(); ++i) {
            int q = states[i] / budget, edits = states[i] % budget;
            if (edits + 1 >= budget) continue;
            for (int b = 0; b < m; ++b) {
                int t = id(dfa.step(q, b), edits + 1);
                if (std::find(states.begin(), states.end(), t) == states.end())
                    states.push_back(t);
            }
        }
        return states;
    };

    Nfa nfa;
    nfa.alphabet = dfa.alphabet();
    nfa.num_states = dfa.num_states() * budget;
    nfa.initial = close({id(dfa.initial(), 0)});
    nfa.accepting.assign(nfa.num_states, false);
    for (int q = 0; q < dfa.num_states(); ++q)
        for (int edits = 0; edits < budget; ++edits)
            nfa.accepting[id(q, edits)] = dfa.is_accepting(q);

    nfa.transitions.resize(static_cast<std::size_t>(nfa.num_states) * m);
    for (int q = 0; q < dfa.num_states(); ++q)
        for (int edits = 0; edits < budget; ++edits)
            for (int a = 0; a < m; ++a) {
                std::vector<int> raw{id(dfa.step(q, a), edits)};  // match
                if (edits + 1 < budget) {
                    raw.push_back(id(q, edits + 1));  // insertion
                    for (int b = 0; b < m; ++b)
                        if (b != a)  // substitution: read a where word had b
                            raw.push_back(id(dfa.step(q, b), edits + 1));
                }
                nfa.transitions[id(q, edits) * m + a] = close(std::move(raw));
            }
    return minimize(determinize(nfa));
}

Dfa mutate_good_shots(const Dfa& dfa, const std::string& event,
                      const std::string& better_event, int min_shots,
                      bool saturating) {
    if (event == better_event)
        throw ValidationError("good-shots mutator needs two distinct events");
    if (min_shots < 1)
        throw ValidationError("good-shots mutator needs min_shots >= 1");

    std::vector<std::string> alphabet = dfa.alphabet();
    for (const auto& e : {event, better_event})
        if (!std::binary_search(alphabet.begin(), alphabet.end(), e)) {
            alphabet.push_back(e);
            std::sort(alphabet.begin(), alphabet.end());
        }
    const int m = static_cast<int>(alphabet.size());
    auto sym = [&](const std::string& e) {
        return static_cast<int>(
            std::lower_bound(alphabet.begin(), alphabet.end(), e) -
            alphabet.begin());
    };
    const int e_idx = sym(event);
    const int better_idx = sym(better_event);

    const int levels = min_shots + 1;
    auto id = [&](int q, int level) { return q * levels + level; };

    Nfa nfa;
    nfa.alphabet = alphabet;
    nfa.num_states = dfa.num_states() * levels;
    nfa.initial = {id(dfa.initial(), 0)};
    nfa.accepting.assign(nfa.num_states, false);
    for (int q = 0; q < dfa.num_states(); ++q)
        if (dfa.is_accepting(q)) nfa.accepting[id(q, levels - 1)] = true;

    nfa.transitions.resize(static_cast<std::size_t>(nfa.num_states) * m);
    for (int q = 0; q < dfa.num_states(); ++q) {
        for (int a = 0; a < m; ++a) {
            // Symbols added to the alphabet have no edges in the source DFA.
            if (!std::binary_search(dfa.alphabet().begin(),
                                    dfa.alphabet().end(), alphabet[a]))
                continue;
            int target = dfa.step(q, dfa.symbol_index(alphabet[a]));
            for (int level = 0; level < levels; ++level) {
                nfa.transitions[id(q, level) * m + a].push_back(
                    id(target, level));
                if (a == e_idx) {
                    // Each e-edge below the top level gains an e'-labeled
                    // parallel that ascends one level.
                    if (level + 1 < levels)
                        nfa.transitions[id(q, level) * m + better_idx]
                            .push_back(id(target, level + 1));
                    else if (saturating)
                        nfa.transitions[id(q, level) * m + better_idx]
                            .push_back(id(target, level));
                }
            }
        }
    }
    return minimize(determinize(nfa));
}

}  // namespace chronicle
