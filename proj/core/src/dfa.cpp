#include "chronicle/dfa.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <tuple>

#include "chronicle/errors.hpp"

namespace chronicle {

namespace {

std::vector<std::string> default_names(int n, const char* prefix) {
    std::vector<std::string> names;
    names.reserve(n);
    for (int i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
    return names;
}

}  // namespace

Dfa::Dfa(std::vector<std::string> alphabet, int num_states, int initial,
         std::vector<bool> accepting, std::vector<int> delta,
         std::vector<std::string> state_names)
    : alphabet_(std::move(alphabet)),
      num_states_(num_states),
      initial_(initial),
      accepting_(std::move(accepting)),
      delta_(std::move(delta)),
      state_names_(std::move(state_names)) {
    const int m = static_cast<int>(alphabet_.size());
    if (num_states_ <= 0) throw ValidationError("dfa needs at least one state");
    if (initial_ < 0 || initial_ >= num_states_)
        throw ValidationError("dfa initial state out of range");
    if (static_cast<int>(accepting_.size()) != num_states_)
        throw ValidationError("dfa accepting vector size mismatch");
    if (static_cast<int>(delta_.size()) != num_states_ * m)
        throw ValidationError("dfa transition table is not total");
    for (int t : delta_)
        if (t < 0 || t >= num_states_)
            throw ValidationError("dfa transition target out of range");

    // Canonicalize alphabet order; permute delta columns to match.
    if (!std::is_sorted(alphabet_.begin(), alphabet_.end())) {
        std::vector<int> perm(m);
        std::iota(perm.begin(), perm.end(), 0);
        std::sort(perm.begin(), perm.end(), [&](int a, int b) {
            return alphabet_[a] < alphabet_[b];
        });
        std::vector<std::string> sorted_alpha(m);
        std::vector<int> permuted(delta_.size());
        for (int e = 0; e < m; ++e) sorted_alpha[e] = alphabet_[perm[e]];
        for (int q = 0; q < num_states_; ++q)
            for (int e = 0; e < m; ++e)
                permuted[q * m + e] = delta_[q * m + perm[e]];
        alphabet_ = std::move(sorted_alpha);
        delta_ = std::move(permuted);
    }
    if (std::adjacent_find(alphabet_.begin(), alphabet_.end()) !=
        alphabet_.end())
        throw ValidationError("dfa alphabet contains duplicate events");

    if (state_names_.empty()) state_names_ = default_names(num_states_, "q");
    if (static_cast<int>(state_names_.size()) != num_states_)
        throw ValidationError("dfa state-name list size mismatch");
}

Dfa Dfa::from_transitions(
    std::vector<std::string> alphabet,
    const std::vector<std::string>& state_names, const std::string& initial,
    const std::vector<std::string>& accepting,
    const std::vector<std::tuple<std::string, std::string, std::string>>&
        transitions) {
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()),
                   alphabet.end());
    const int m = static_cast<int>(alphabet.size());

    std::map<std::string, int> state_id;
    for (const auto& s : state_names) {
        if (!state_id.emplace(s, static_cast<int>(state_id.size())).second)
            throw ValidationError("duplicate state name: " + s);
    }
    auto lookup_state = [&](const std::string& s) {
        auto it = state_id.find(s);
        if (it == state_id.end())
            throw ValidationError("unknown state: " + s);
        return it->second;
    };
    auto lookup_event = [&](const std::string& e) {
        auto it = std::lower_bound(alphabet.begin(), alphabet.end(), e);
        if (it == alphabet.end() || *it != e)
            throw ValidationError("event not in alphabet: " + e);
        return static_cast<int>(it - alphabet.begin());
    };

    int n = static_cast<int>(state_names.size());
    std::vector<int> delta(static_cast<std::size_t>(n + 1) * m, -1);
    for (const auto& [from, event, to] : transitions) {
        int& slot = delta[lookup_state(from) * m + lookup_event(event)];
        int target = lookup_state(to);
        if (slot != -1 && slot != target)
            throw ValidationError("nondeterministic transition on state " +
                                  from + ", event " + event);
        slot = target;
    }

    // Route missing pairs to a sink, if any are missing.
    bool need_sink = false;
    for (int q = 0; q < n; ++q)
        for (int e = 0; e < m; ++e)
            if (delta[q * m + e] == -1) need_sink = true;
    std::vector<std::string> names = state_names;
    if (need_sink) {
        names.push_back("__sink");
        for (int e = 0; e < m; ++e) delta[n * m + e] = n;
        for (int q = 0; q < n; ++q)
            for (int e = 0; e < m; ++e)
                if (delta[q * m + e] == -1) delta[q * m + e] = n;
        ++n;
    }
    delta.resize(static_cast<std::size_t>(n) * m);

    std::vector<bool> acc(n, false);
    for (const auto& a : accepting) acc[lookup_state(a)] = true;
    return Dfa(std::move(alphabet), n, lookup_state(initial), std::move(acc),
               std::move(delta), std::move(names));
}

int Dfa::symbol_index(const std::string& event) const {
    auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), event);
    if (it == alphabet_.end() || *it != event)
        throw ValidationError("event not in alphabet: " + event);
    return static_cast<int>(it - alphabet_.begin());
}

int Dfa::run(std::span<const int> word) const {
    int q = initial_;
    for (int e : word) {
        if (e < 0 || e >= num_symbols())
            throw ValidationError("symbol index outside alphabet");
        q = step(q, e);
    }
    return q;
}

int Dfa::run(const std::vector<std::string>& word) const {
    return run(std::span<const int>(to_indices(word)));
}

bool Dfa::accepts(std::span<const int> word) const {
    return accepting_[run(word)];
}

bool Dfa::accepts(const std::vector<std::string>& word) const {
    return accepting_[run(word)];
}

Word Dfa::to_indices(const std::vector<std::string>& word) const {
    Word out;
    out.reserve(word.size());
    for (const auto& e : word) out.push_back(symbol_index(e));
    return out;
}

void Nfa::check() const {
    const std::size_t m = alphabet.size();
    if (!std::is_sorted(alphabet.begin(), alphabet.end()))
        throw InternalError("nfa alphabet must be sorted");
    if (static_cast<int>(accepting.size()) != num_states ||
        transitions.size() != static_cast<std::size_t>(num_states) * m)
        throw InternalError("nfa shape mismatch");
    for (int q : initial)
        if (q < 0 || q >= num_states)
            throw InternalError("nfa initial state out of range");
    for (const auto& targets : transitions)
        for (int t : targets)
            if (t < 0 || t >= num_states)
                throw InternalError("nfa transition target out of range");
}

Nfa nfa_view(const Dfa& dfa) {
    Nfa nfa;
    nfa.alphabet = dfa.alphabet();
    nfa.num_states = dfa.num_states();
    nfa.initial = {dfa.initial()};
    nfa.accepting.resize(nfa.num_states);
    nfa.transitions.resize(static_cast<std::size_t>(nfa.num_states) *
                           nfa.alphabet.size());
    for (int q = 0; q < nfa.num_states; ++q) {
        nfa.accepting[q] = dfa.is_accepting(q);
        for (int e = 0; e < dfa.num_symbols(); ++e)
            nfa.transitions[q * nfa.alphabet.size() + e] = {dfa.step(q, e)};
    }
    return nfa;
}

Dfa determinize(const Nfa& nfa) {
    nfa.check();
    const int m = static_cast<int>(nfa.alphabet.size());

    auto normalize = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };

    std::map<std::vector<int>, int> subset_id;
    std::vector<std::vector<int>> subsets;
    auto intern = [&](std::vector<int> subset) {
        auto [it, inserted] =
            subset_id.emplace(std::move(subset), static_cast<int>(subsets.size()));
        if (inserted) subsets.push_back(it->first);
        return it->second;
    };

    std::vector<int> delta;
    int start = intern(normalize(nfa.initial));
    for (std::size_t id = 0; id < subsets.size(); ++id) {
        for (int e = 0; e < m; ++e) {
            std::vector<int> next;
            for (int q : subsets[id])
                for (int t : nfa.transitions[q * m + e]) next.push_back(t);
            int target = intern(normalize(std::move(next)));
            delta.push_back(target);
        }
    }

    int n = static_cast<int>(subsets.size());
    std::vector<bool> accepting(n, false);
    for (int id = 0; id < n; ++id)
        for (int q : subsets[id])
            if (nfa.accepting[q]) accepting[id] = true;
    return Dfa(nfa.alphabet, n, start, std::move(accepting), std::move(delta));
}

Dfa minimize(const Dfa& dfa) {
    const int m = dfa.num_symbols();

    // Reachable states only.
    std::vector<int> reach_id(dfa.num_states(), -1);
    std::vector<int> order;
    reach_id[dfa.initial()] = 0;
    order.push_back(dfa.initial());
    for (std::size_t i = 0; i < order.size(); ++i)
        for (int e = 0; e < m; ++e) {
            int t = dfa.step(order[i], e);
            if (reach_id[t] == -1) {
                reach_id[t] = static_cast<int>(order.size());
                order.push_back(t);
            }
        }
    const int n = static_cast<int>(order.size());

    // Moore refinement over the reachable part.
    std::vector<int> block(n);
    for (int i = 0; i < n; ++i) block[i] = dfa.is_accepting(order[i]) ? 1 : 0;
    int num_blocks = 2;
    for (;;) {
        std::map<std::vector<int>, int> sig_id;
        std::vector<int> next_block(n);
        for (int i = 0; i < n; ++i) {
            std::vector<int> sig;
            sig.reserve(m + 1);
            sig.push_back(block[i]);
            for (int e = 0; e < m; ++e)
                sig.push_back(block[reach_id[dfa.step(order[i], e)]]);
            auto [it, _] =
                sig_id.emplace(std::move(sig), static_cast<int>(sig_id.size()));
            next_block[i] = it->second;
        }
        int new_count = static_cast<int>(sig_id.size());
        block.swap(next_block);
        if (new_count == num_blocks) break;
        num_blocks = new_count;
    }

    std::vector<int> delta(static_cast<std::size_t>(num_blocks) * m, -1);
    std::vector<bool> accepting(num_blocks, false);
    for (int i = 0; i < n; ++i) {
        accepting[block[i]] = dfa.is_accepting(order[i]);
        for (int e = 0; e < m; ++e)
            delta[block[i] * m + e] = block[reach_id[dfa.step(order[i], e)]];
    }
    return Dfa(dfa.alphabet(), num_blocks, block[reach_id[dfa.initial()]],
               std::move(accepting), std::move(delta));
}

}  // namespace chronicle
