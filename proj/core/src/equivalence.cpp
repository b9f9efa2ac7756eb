#include "chronicle/equivalence.hpp"

#include <queue>
#include <set>

#include "chronicle/errors.hpp"

namespace chronicle {

BisimWitness language_equivalent(const Dfa& d1, const Dfa& d2) {
    if (d1.alphabet() != d2.alphabet())
        throw ValidationError("equivalence check requires identical alphabets");
    const int m = d1.num_symbols();

    // BFS over state pairs; symbols are visited in alphabet (sorted) order,
    // so each pair is first reached via its length-lex-least word and the
    // first acceptance mismatch yields the canonical counterexample.
    struct Node {
        int q1, q2;
        int parent;  // index into nodes, -1 at root
        int via;     // symbol leading here from parent
    };
    std::vector<Node> nodes{{d1.initial(), d2.initial(), -1, -1}};
    std::set<std::pair<int, int>> seen{{d1.initial(), d2.initial()}};

    auto counterexample_to = [&](int idx) {
        std::vector<std::string> word;
        for (int i = idx; nodes[i].parent != -1; i = nodes[i].parent)
            word.push_back(d1.alphabet()[nodes[i].via]);
        std::reverse(word.begin(), word.end());
        return word;
    };

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto [q1, q2, parent, via] = nodes[i];
        if (d1.is_accepting(q1) != d2.is_accepting(q2)) {
            BisimWitness w;
            w.equivalent = false;
            w.counterexample = counterexample_to(static_cast<int>(i));
            return w;
        }
        for (int e = 0; e < m; ++e) {
            std::pair<int, int> next{d1.step(q1, e), d2.step(q2, e)};
            if (seen.insert(next).second)
                nodes.push_back({next.first, next.second,
                                 static_cast<int>(i), e});
        }
    }

    // All reachable pairs agree on acceptance; the explored set is closed
    // under transitions, hence a bisimulation.
    BisimWitness w;
    w.equivalent = true;
    w.relation.assign(seen.begin(), seen.end());
    return w;
}

}  // namespace chronicle
