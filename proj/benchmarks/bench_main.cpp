#include <benchmark/benchmark.h>

#include "chronicle/io.hpp"
#include "chronicle/mutators.hpp"
#include "chronicle/simulate.hpp"

using namespace chronicle;

namespace {

const std::string kConfigDir = CHRONICLE_CONFIG_DIR;

ExperimentConfig oulu() {
    static ExperimentConfig config =
        load_config(kConfigDir + "/oulu/config.json");
    return config;
}

ExperimentConfig wedding() {
    static ExperimentConfig config =
        load_config(kConfigDir + "/wedding/config.json");
    return config;
}

void bm_build_product(benchmark::State& state) {
    auto config = wedding();
    auto channel = select_channel(config, "custom");
    for (auto _ : state) {
        auto pomdp = build_goal_pomdp(config.model, channel, config.spec);
        benchmark::DoNotOptimize(pomdp.mdp.num_states());
    }
}
BENCHMARK(bm_build_product);

void bm_value_iteration(benchmark::State& state) {
    auto config = wedding();
    GoalMdp mdp = extract_goal_mdp(config.model, config.spec);
    for (auto _ : state) {
        auto solution = solve_mdp(mdp, config.tol, config.max_iter);
        benchmark::DoNotOptimize(solution.values[mdp.initial]);
    }
}
BENCHMARK(bm_value_iteration);

void bm_belief_update(benchmark::State& state) {
    auto config = oulu();
    auto channel = select_channel(config, "custom");
    GoalPomdp pomdp = build_goal_pomdp(config.model, channel, config.spec);
    Belief b = initial_belief(pomdp.mdp);
    int a = 0;
    int z = pomdp.encode_observation(false, 1);
    if (observation_likelihood(pomdp, b, a, z) <= 0.0)
        z = pomdp.encode_observation(false, 0);
    for (auto _ : state) {
        Belief next = belief_update(pomdp, b, a, z);
        benchmark::DoNotOptimize(next.front());
    }
}
BENCHMARK(bm_belief_update);

void bm_plan_online(benchmark::State& state) {
    auto config = oulu();
    auto channel = select_channel(config, "hidden");
    GoalPomdp pomdp = build_goal_pomdp(config.model, channel, config.spec);
    auto solution = solve_mdp(pomdp.mdp);
    Belief b = initial_belief(pomdp.mdp);
    for (auto _ : state) {
        int action = plan_online(pomdp, solution, b, state.range(0));
        benchmark::DoNotOptimize(action);
    }
}
BENCHMARK(bm_plan_online)->Arg(1)->Arg(2)->Arg(3);

void bm_mutator_pipeline(benchmark::State& state) {
    auto spec = parse_dfa(read_file(kConfigDir + "/oulu/just_k.json"));
    for (auto _ : state) {
        Dfa mutated = mutate_levenshtein(mutate_supersequence(spec), 1);
        benchmark::DoNotOptimize(mutated.num_states());
    }
}
BENCHMARK(bm_mutator_pipeline);

void bm_simulate_batch(benchmark::State& state) {
    auto config = oulu();
    auto channel = select_channel(config, "full");
    GoalPomdp pomdp = build_goal_pomdp(config.model, channel, config.spec);
    auto policy = PolicyHandle::mdp_policy(pomdp, solve_mdp(pomdp.mdp));
    for (auto _ : state) {
        auto stats = run_batch(config.model, channel, config.spec, policy,
                               config.max_steps, 100, config.seed);
        benchmark::DoNotOptimize(stats.mean_steps);
    }
}
BENCHMARK(bm_simulate_batch);

}  // namespace

BENCHMARK_MAIN();
