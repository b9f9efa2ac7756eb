#ifndef CHRONICLE_SOLVER_HPP
#define CHRONICLE_SOLVER_HPP

#include <vector>

#include "chronicle/product.hpp"

namespace chronicle {

// Distribution over product states; sums to 1 within kBeliefTolerance.
using Belief = std::vector<double>;

inline constexpr double kBeliefTolerance = 1e-12;

Belief initial_belief(const GoalMdp& mdp);

// Pr(z | a, b): total probability of observing z after acting a from b.
double observation_likelihood(const GoalPomdp& pomdp, const Belief& belief,
                              int action, int z);

// Bayes filter step; throws ImpossibleObservationError when z has zero
// likelihood under (belief, action).
Belief belief_update(const GoalPomdp& pomdp, const Belief& belief, int action,
                     int z);

// One-step predicted distribution b T_a, shared by the filter and planner.
Belief predict(const GoalMdp& mdp, const Belief& belief, int action);

/// Value-iteration output: expected steps-to-goal per product state
/// (infinity outside the almost-sure winning set) and a minimizing action
/// for every finite-value non-goal state.
struct MdpSolution {
    std::vector<double> values;  // +infinity where the goal is not a.s. reachable
    std::vector<int> policy;     // action index; -1 on goal / infinite states
    int iterations = 0;
    double residual = 0.0;
};

// Largest set W containing the goals such that from every state of W some
// action keeps all successors inside W while the goal stays reachable
// within W. Expected steps are finite exactly on W.
std::vector<bool> almost_sure_winning_set(const GoalMdp& mdp);

// Value iteration for expected steps-to-goal, from V = 0 (monotone
// iterates). Throws UnachievableError if the initial state lies outside
// the winning set, ConvergenceError if max_iter is exhausted. Argmin ties
// break by action (event-name) order.
MdpSolution solve_mdp(const GoalMdp& mdp, double tol = 1e-9,
                      int max_iter = 1'000'000);

// Exact expected steps under a fixed policy, via a direct linear solve.
// Throws ValidationError when the policy is improper (singular system).
std::vector<double> policy_evaluation(const GoalMdp& mdp,
                                      const std::vector<int>& policy);

}  // namespace chronicle

#endif
