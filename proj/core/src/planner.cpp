#include "chronicle/planner.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "chronicle/errors.hpp"

namespace chronicle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double goal_mass(const GoalMdp& mdp, const Belief& belief) {
    double mass = 0.0;
    for (int x = 0; x < mdp.num_states(); ++x)
        if (mdp.goal[x]) mass += belief[x];
    return mass;
}

double leaf_value(const MdpSolution& solution, const Belief& belief) {
    double v = 0.0;
    for (std::size_t x = 0; x < belief.size(); ++x)
        if (belief[x] > 0.0) {
            if (std::isinf(solution.values[x])) return kInf;
            v += belief[x] * solution.values[x];
        }
    return v;
}

// Expected cost of acting `action`: one step plus the observation-weighted
// continuation values.
double action_value(const GoalPomdp& pomdp, const MdpSolution& solution,
                    const Belief& belief, int action, int depth) {
    const GoalMdp& mdp = pomdp.mdp;
    Belief predicted = predict(mdp, belief, action);

    // Group predicted mass by observation. The goal marker needs no
    // branch: its posterior is goal-supported and worth 0.
    std::map<int, std::pair<double, Belief>> branches;
    for (int x = 0; x < mdp.num_states(); ++x) {
        if (predicted[x] <= 0.0 || mdp.goal[x]) continue;
        int s = mdp.states[x].model_state;
        bool hit = pomdp.event_in_state[s][action];
        for (int y = 0; y < pomdp.num_channel_outputs(); ++y) {
            double mass = predicted[x] * pomdp.emission[s * pomdp.num_channel_outputs() + y];
            if (mass <= 0.0) continue;
            auto& [total, posterior] = branches[pomdp.encode_observation(hit, y)];
            if (posterior.empty()) posterior.assign(mdp.num_states(), 0.0);
            total += mass;
            posterior[x] += mass;
        }
    }

    double value = 1.0;  // c'(b, a) = 1 on non-goal beliefs
    for (auto& [z, branch] : branches) {
        auto& [mass, posterior] = branch;
        for (double& p : posterior) p /= mass;
        double continuation =
            depth <= 1 ? leaf_value(solution, posterior)
                       : plan_value(pomdp, solution, posterior, depth - 1);
        if (std::isinf(continuation)) return kInf;
        value += mass * continuation;
    }
    return value;
}

}  // namespace

double plan_value(const GoalPomdp& pomdp, const MdpSolution& solution,
                  const Belief& belief, int depth) {
    if (goal_mass(pomdp.mdp, belief) >= 1.0 - kBeliefTolerance) return 0.0;
    if (depth <= 0) return leaf_value(solution, belief);
    double best = kInf;
    for (int a = 0; a < pomdp.mdp.num_actions(); ++a)
        best = std::min(best, action_value(pomdp, solution, belief, a, depth));
    return best;
}

int plan_online(const GoalPomdp& pomdp, const MdpSolution& solution,
                const Belief& belief, int depth) {
    if (depth < 1)
        throw ValidationError("online planner needs depth >= 1");
    if (goal_mass(pomdp.mdp, belief) >= 1.0 - kBeliefTolerance)
        throw ValidationError("online planner called on a goal belief");

    double best = kInf;
    int best_action = -1;
    for (int a = 0; a < pomdp.mdp.num_actions(); ++a) {
        double v = action_value(pomdp, solution, belief, a, depth);
        if (v < best) {
            best = v;
            best_action = a;
        }
    }
    if (best_action < 0)
        throw UnachievableError(
            "every action has infinite expected cost from this belief");
    return best_action;
}

PolicyHandle PolicyHandle::mdp_policy(const GoalPomdp& pomdp,
                                      MdpSolution solution) {
    return PolicyHandle(pomdp, std::move(solution), 0);
}

PolicyHandle PolicyHandle::online_planner(const GoalPomdp& pomdp,
                                          MdpSolution solution, int depth) {
    if (depth < 1)
        throw ValidationError("online planner needs depth >= 1");
    return PolicyHandle(pomdp, std::move(solution), depth);
}

int PolicyHandle::act(const Belief& belief) const {
    if (depth_ > 0) return plan_online(*pomdp_, solution_, belief, depth_);

    // MDP policy lookup; valid only for point-mass beliefs, which is what
    // the fully observable channel produces.
    for (int x = 0; x < pomdp_->mdp.num_states(); ++x) {
        if (belief[x] > 1.0 - 1e-9) {
            int a = solution_.policy[x];
            if (a < 0)
                throw InternalError(
                    "MDP policy consulted on a goal or unwinnable state");
            return a;
        }
    }
    throw InternalError(
        "MDP policy consulted on a non-point-mass belief; use the online "
        "planner for partial observability");
}

}  // namespace chronicle
