#include "chronicle/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "chronicle/errors.hpp"

namespace chronicle {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Belief initial_belief(const GoalMdp& mdp) {
    Belief b(mdp.num_states(), 0.0);
    b[mdp.initial] = 1.0;
    return b;
}

Belief predict(const GoalMdp& mdp, const Belief& belief, int action) {
    Belief out(mdp.num_states(), 0.0);
    for (int x = 0; x < mdp.num_states(); ++x) {
        double p = belief[x];
        if (p <= 0.0) continue;
        for (const auto& [target, prob] : mdp.trans[action][x])
            out[target] += p * prob;
    }
    return out;
}

double observation_likelihood(const GoalPomdp& pomdp, const Belief& belief,
                              int action, int z) {
    Belief predicted = predict(pomdp.mdp, belief, action);
    double total = 0.0;
    for (int x = 0; x < pomdp.mdp.num_states(); ++x)
        if (predicted[x] > 0.0)
            total += pomdp.obs_prob(action, x, z) * predicted[x];
    return total;
}

Belief belief_update(const GoalPomdp& pomdp, const Belief& belief, int action,
                     int z) {
    Belief predicted = predict(pomdp.mdp, belief, action);
    Belief posterior(pomdp.mdp.num_states(), 0.0);
    double total = 0.0;
    for (int x = 0; x < pomdp.mdp.num_states(); ++x) {
        if (predicted[x] <= 0.0) continue;
        double mass = pomdp.obs_prob(action, x, z) * predicted[x];
        posterior[x] = mass;
        total += mass;
    }
    if (total <= 0.0)
        throw ImpossibleObservationError(
            "belief update conditioned on a zero-likelihood observation");
    for (double& p : posterior) p /= total;
    return posterior;
}

std::vector<bool> almost_sure_winning_set(const GoalMdp& mdp) {
    const int n = mdp.num_states();
    std::vector<bool> candidate(n, true);

    // Greatest fixpoint: repeatedly keep only states that can reach the
    // goal using actions whose every successor stays inside the candidate.
    for (;;) {
        std::vector<bool> reach(n, false);
        for (int x = 0; x < n; ++x) reach[x] = mdp.goal[x] && candidate[x];
        bool grown = true;
        while (grown) {
            grown = false;
            for (int x = 0; x < n; ++x) {
                if (reach[x] || !candidate[x]) continue;
                for (int a = 0; a < mdp.num_actions() && !reach[x]; ++a) {
                    bool safe = true, progress = false;
                    for (const auto& [target, prob] : mdp.trans[a][x]) {
                        if (!candidate[target]) safe = false;
                        if (reach[target]) progress = true;
                    }
                    if (safe && progress) {
                        reach[x] = true;
                        grown = true;
                    }
                }
            }
        }
        if (reach == candidate) return candidate;
        candidate = std::move(reach);
    }
}

MdpSolution solve_mdp(const GoalMdp& mdp, double tol, int max_iter) {
    const int n = mdp.num_states();
    const int num_actions = mdp.num_actions();
    std::vector<bool> winning = almost_sure_winning_set(mdp);

    if (!winning[mdp.initial]) {
        std::string losers;
        for (int x = 0; x < n; ++x)
            if (!winning[x]) {
                if (!losers.empty()) losers += ", ";
                losers += mdp.state_name(x);
            }
        throw UnachievableError(
            "the story cannot be recorded with probability 1; initial "
            "product state is outside the winning set (unwinnable states: " +
            losers + ")");
    }

    MdpSolution sol;
    sol.values.assign(n, 0.0);
    sol.policy.assign(n, -1);
    for (int x = 0; x < n; ++x)
        if (!winning[x]) sol.values[x] = kInf;

    std::vector<double> next(n);
    for (sol.iterations = 0; sol.iterations < max_iter; ++sol.iterations) {
        double residual = 0.0;
        for (int x = 0; x < n; ++x) {
            if (mdp.goal[x] || !winning[x]) {
                next[x] = sol.values[x];
                continue;
            }
            double best = kInf;
            for (int a = 0; a < num_actions; ++a) {
                double q = 1.0;
                for (const auto& [target, prob] : mdp.trans[a][x]) {
                    if (!winning[target]) {
                        q = kInf;
                        break;
                    }
                    q += prob * sol.values[target];
                }
                if (q < best) best = q;
            }
            next[x] = best;
            residual = std::max(residual, std::abs(best - sol.values[x]));
        }
        sol.values.swap(next);
        sol.residual = residual;
        if (residual < tol) break;
    }
    if (sol.residual >= tol)
        throw ConvergenceError(
            "value iteration did not reach tolerance within " +
                std::to_string(max_iter) + " iterations",
            sol.residual);

    for (int x = 0; x < n; ++x) {
        if (mdp.goal[x] || !winning[x]) continue;
        double best = kInf;
        int best_action = -1;
        for (int a = 0; a < num_actions; ++a) {
            double q = 1.0;
            for (const auto& [target, prob] : mdp.trans[a][x]) {
                if (!winning[target]) {
                    q = kInf;
                    break;
                }
                q += prob * sol.values[target];
            }
            if (q < best) {  // strict: ties keep the earliest action
                best = q;
                best_action = a;
            }
        }
        sol.policy[x] = best_action;
    }
    return sol;
}

std::vector<double> policy_evaluation(const GoalMdp& mdp,
                                      const std::vector<int>& policy) {
    const int n = mdp.num_states();
    if (static_cast<int>(policy.size()) != n)
        throw ValidationError("policy size does not match the product");

    // Solve (I - T_pi) V = 1 on the non-goal states with a policy entry.
    std::vector<int> rows;
    std::vector<int> row_of(n, -1);
    for (int x = 0; x < n; ++x)
        if (!mdp.goal[x] && policy[x] >= 0) {
            row_of[x] = static_cast<int>(rows.size());
            rows.push_back(x);
        }
    const int k = static_cast<int>(rows.size());

    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(k, k);
    Eigen::VectorXd rhs = Eigen::VectorXd::Ones(k);
    for (int i = 0; i < k; ++i) {
        int x = rows[i];
        for (const auto& [target, prob] : mdp.trans[policy[x]][x]) {
            if (mdp.goal[target]) continue;
            if (row_of[target] < 0)
                throw ValidationError(
                    "policy leads to a state without a policy entry: " +
                    mdp.state_name(target));
            system(i, row_of[target]) -= prob;
        }
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible())
        throw ValidationError(
            "policy evaluation system is singular; policy is improper");
    Eigen::VectorXd v = lu.solve(rhs);

    std::vector<double> values(n, 0.0);
    for (int x = 0; x < n; ++x) {
        if (mdp.goal[x]) continue;
        values[x] = row_of[x] >= 0 ? v(row_of[x]) : kInf;
    }
    return values;
}

}  // namespace chronicle
