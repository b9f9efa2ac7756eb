#include "chronicle/product.hpp"

#include <cmath>
#include <map>

#include "chronicle/errors.hpp"

namespace chronicle {

namespace {

void require_compatible(const EventModel& model, const Dfa& spec) {
    if (spec.alphabet() != model.events)
        throw ValidationError(
            "specification alphabet differs from the model event set");
}

}  // namespace

double GoalPomdp::obs_prob(int a, int x, int z) const {
    const auto [s, q] = mdp.states[x];
    const int y_count = num_channel_outputs();
    if (mdp.goal[x]) return z == kGoalObservation ? 1.0 : 0.0;
    if (z == kGoalObservation) return 0.0;
    bool hit = (z - 1) >= y_count;
    int y = (z - 1) % y_count;
    if (event_in_state[s][a] != hit) return 0.0;
    return emission[s * y_count + y];
}

std::string GoalPomdp::observation_name(int z) const {
    if (z == kGoalObservation) return "goal";
    bool hit = (z - 1) >= num_channel_outputs();
    int y = (z - 1) % num_channel_outputs();
    return std::string(hit ? "hit" : "miss") + "," + channel_outputs[y];
}

GoalMdp extract_goal_mdp(const EventModel& model, const Dfa& spec) {
    require_compatible(model, spec);
    if (auto report = validate(model); !report.ok())
        throw ValidationError("invalid event model: " + report.issues.front());

    const int n = model.num_states();
    const int num_actions = model.num_events();

    // Forward reachability from (s0, q0); only reachable product states are
    // materialized.
    std::map<std::pair<int, int>, int> index;
    std::vector<ProductState> states;
    auto intern = [&](int s, int q) {
        auto [it, inserted] =
            index.emplace(std::make_pair(s, q), static_cast<int>(states.size()));
        if (inserted) states.push_back({s, q});
        return it->second;
    };

    GoalMdp mdp;
    mdp.initial = intern(model.initial, spec.initial());
    mdp.trans.resize(num_actions);

    for (std::size_t xi = 0; xi < states.size(); ++xi) {
        const auto [s, q] = states[xi];
        const bool is_goal = spec.is_accepting(q);
        for (int a = 0; a < num_actions; ++a) {
            auto& row = mdp.trans[a];
            row.resize(states.size());
            std::vector<std::pair<int, double>> successors;
            if (is_goal) {
                successors.emplace_back(static_cast<int>(xi), 1.0);
            } else {
                double sum = 0.0;
                for (int s2 = 0; s2 < n; ++s2) {
                    double p = model.prob(s, s2);
                    if (p <= 0.0) continue;
                    sum += p;
                    int q2 = model.has_event(s2, a) ? spec.step(q, a) : q;
                    successors.emplace_back(intern(s2, q2), p);
                }
                if (std::abs(sum - 1.0) > kRowSumTolerance)
                    throw InternalError("product transition row is not "
                                        "stochastic at state " +
                                        model.states[s]);
            }
            row.resize(states.size());
            row[xi] = std::move(successors);
        }
    }
    for (auto& row : mdp.trans) row.resize(states.size());

    mdp.states = std::move(states);
    mdp.actions = model.events;
    mdp.goal.resize(mdp.states.size());
    for (std::size_t xi = 0; xi < mdp.states.size(); ++xi)
        mdp.goal[xi] = spec.is_accepting(mdp.states[xi].dfa_state);
    mdp.model_state_names = model.states;
    mdp.dfa_state_names = spec.state_names();
    mdp.num_model_states = n;
    return mdp;
}

GoalPomdp build_goal_pomdp(const EventModel& model, const ObservationModel& obs,
                           const Dfa& spec) {
    if (auto report = validate(model, obs); !report.ok())
        throw ValidationError("invalid model/observation pair: " +
                              report.issues.front());
    GoalPomdp pomdp;
    pomdp.mdp = extract_goal_mdp(model, spec);
    pomdp.channel_outputs = obs.observations;
    pomdp.emission = obs.emission;
    pomdp.event_in_state.assign(model.num_states(),
                                std::vector<bool>(model.num_events(), false));
    for (int s = 0; s < model.num_states(); ++s)
        for (int e : model.labels[s]) pomdp.event_in_state[s][e] = true;

    // Observation rows must be stochastic for every (action, state).
    for (int a = 0; a < pomdp.mdp.num_actions(); ++a)
        for (int x = 0; x < pomdp.mdp.num_states(); ++x) {
            double sum = 0.0;
            for (int z = 0; z < pomdp.num_observations(); ++z)
                sum += pomdp.obs_prob(a, x, z);
            if (std::abs(sum - 1.0) > kRowSumTolerance)
                throw InternalError("observation row is not stochastic");
        }
    return pomdp;
}

std::pair<std::vector<double>, int> project_belief(
    const GoalMdp& mdp, const std::vector<double>& belief) {
    if (static_cast<int>(belief.size()) != mdp.num_states())
        throw InternalError("belief size does not match the product");
    int q = -1;
    std::vector<double> over_model(mdp.num_model_states, 0.0);
    for (int x = 0; x < mdp.num_states(); ++x) {
        if (belief[x] <= 0.0) continue;
        if (q == -1) {
            q = mdp.states[x].dfa_state;
        } else if (q != mdp.states[x].dfa_state) {
            throw InternalError(
                "belief support spans multiple DFA states; reachable "
                "beliefs must not");
        }
        over_model[mdp.states[x].model_state] += belief[x];
    }
    if (q == -1) throw InternalError("belief has empty support");
    return {std::move(over_model), q};
}

}  // namespace chronicle
