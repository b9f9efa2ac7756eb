#ifndef CHRONICLE_PRODUCT_HPP
#define CHRONICLE_PRODUCT_HPP

#include <string>
#include <utility>
#include <vector>

#include "chronicle/dfa.hpp"
#include "chronicle/event_model.hpp"

namespace chronicle {

struct ProductState {
    int model_state;
    int dfa_state;
};

/// The goal-directed product of an event model and a specification DFA:
/// states are (model state, DFA state) pairs reachable from the initial
/// pair, actions are events, goal states (accepting DFA component) are
/// absorbing and cost-free, every other (state, action) costs one step.
struct GoalMdp {
    std::vector<ProductState> states;
    std::vector<std::string> actions;  // model events, sorted
    int initial = 0;
    std::vector<bool> goal;
    // trans[a][x] = (successor, probability) pairs; rows sum to 1
    std::vector<std::vector<std::vector<std::pair<int, double>>>> trans;

    std::vector<std::string> model_state_names;
    std::vector<std::string> dfa_state_names;
    int num_model_states = 0;

    int num_states() const { return static_cast<int>(states.size()); }
    int num_actions() const { return static_cast<int>(actions.size()); }
    double cost(int x, int /*a*/) const { return goal[x] ? 0.0 : 1.0; }
    std::string state_name(int x) const {
        return model_state_names[states[x].model_state] + "," +
               dfa_state_names[states[x].dfa_state];
    }
};

/// Goal MDP plus the observation machinery: observations are either the
/// goal marker (emitted exactly on goal states) or a pair of the
/// prediction outcome and a channel output.
///
/// Observation encoding: index 0 is the goal marker; index 1 + hit*|Y| + y
/// is the pair (hit, y) with hit in {0 = missed, 1 = recorded}.
struct GoalPomdp {
    GoalMdp mdp;
    std::vector<std::string> channel_outputs;       // Y
    std::vector<double> emission;                   // |S| x |Y|
    std::vector<std::vector<bool>> event_in_state;  // [s][e]

    int num_channel_outputs() const {
        return static_cast<int>(channel_outputs.size());
    }
    int num_observations() const { return 1 + 2 * num_channel_outputs(); }

    static constexpr int kGoalObservation = 0;
    int encode_observation(bool hit, int y) const {
        return 1 + (hit ? num_channel_outputs() : 0) + y;
    }

    double obs_prob(int a, int x, int z) const;
    std::string observation_name(int z) const;
};

GoalMdp extract_goal_mdp(const EventModel& model, const Dfa& spec);

GoalPomdp build_goal_pomdp(const EventModel& model, const ObservationModel& obs,
                           const Dfa& spec);

// The projection of a single-q belief onto (distribution over model states,
// DFA state). Throws InternalError on mixed-q support: reachable beliefs
// always concentrate on one DFA component, so mixing signals a solver bug.
std::pair<std::vector<double>, int> project_belief(
    const GoalMdp& mdp, const std::vector<double>& belief);

}  // namespace chronicle

#endif
