#ifndef CHRONICLE_PLANNER_HPP
#define CHRONICLE_PLANNER_HPP

#include "chronicle/solver.hpp"

namespace chronicle {

inline constexpr int kDefaultPlanDepth = 6;

// Exact expectimax over the belief tree to the given depth: at every node
// each action is expanded over its positive-likelihood observations, and
// leaves are scored by the MDP values averaged under the belief (a
// QMDP-style bound, exact wherever beliefs are point masses). Returns the
// argmin action; ties break by action (event-name) order.
//
// Throws ValidationError on depth < 1, UnachievableError when every action
// has infinite value (belief mass outside the winning set).
int plan_online(const GoalPomdp& pomdp, const MdpSolution& mdp_values,
                const Belief& belief, int depth);

// Depth-limited expected cost of the best strategy from a belief; the
// quantity plan_online minimizes over first actions.
double plan_value(const GoalPomdp& pomdp, const MdpSolution& mdp_values,
                  const Belief& belief, int depth);

/// Decision rule for simulation: either a lookup into an MDP policy
/// through the belief projection (valid under full observability), or a
/// per-decision online expectimax search.
class PolicyHandle {
  public:
    static PolicyHandle mdp_policy(const GoalPomdp& pomdp,
                                   MdpSolution solution);
    static PolicyHandle online_planner(const GoalPomdp& pomdp,
                                       MdpSolution solution,
                                       int depth = kDefaultPlanDepth);

    // Action for a non-goal reachable belief.
    int act(const Belief& belief) const;

    const MdpSolution& solution() const { return solution_; }
    const GoalPomdp& pomdp() const { return *pomdp_; }

  private:
    PolicyHandle(const GoalPomdp& pomdp, MdpSolution solution, int depth)
        : pomdp_(&pomdp), solution_(std::move(solution)), depth_(depth) {}

    const GoalPomdp* pomdp_;
    MdpSolution solution_;
    int depth_;  // 0 = direct MDP policy lookup
};

}  // namespace chronicle

#endif
