#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "chronicle/equivalence.hpp"
#include "chronicle/errors.hpp"
#include "chronicle/io.hpp"
#include "chronicle/mutator_expr.hpp"
#include "chronicle/simulate.hpp"

namespace {

using namespace chronicle;

constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitUnachievable = 4;
constexpr int kExitNonConvergence = 5;

struct CommonOptions {
    std::string config_path;
};

int run_validate(const std::string& config_path, const std::string& model_path) {
    ValidationReport report;
    if (!model_path.empty()) {
        ModelDocument doc = parse_model(read_file(model_path));
        report = doc.channel ? validate(doc.model, *doc.channel)
                             : validate(doc.model);
    } else {
        ExperimentConfig config = load_config(config_path);
        ObservationModel channel =
            select_channel(config, config.observability);
        report = validate(config.model, channel);
        if (config.spec.alphabet() != config.model.events)
            report.issues.push_back(
                "specification alphabet differs from the model event set");
    }
    if (report.ok()) {
        std::cout << "ok\n";
        return 0;
    }
    for (const auto& issue : report.issues) std::cout << issue << "\n";
    return kExitValidation;
}

int run_mutate(const std::string& expr,
               const std::vector<std::string>& bindings,
               const std::string& out_path) {
    std::map<std::string, Dfa> env;
    for (const auto& binding : bindings) {
        auto eq = binding.find('=');
        if (eq == std::string::npos)
            throw ParseError("spec binding must look like NAME=path: " +
                             binding);
        env.emplace(binding.substr(0, eq),
                    parse_dfa(read_file(binding.substr(eq + 1))));
    }
    Dfa result = parse_mutator_expression(expr, env);
    std::string doc = serialize_dfa(result);
    if (out_path.empty())
        std::cout << doc;
    else
        write_file(out_path, doc);
    return 0;
}

GoalPomdp build_from_config(const ExperimentConfig& config,
                            const std::string& observability) {
    return build_goal_pomdp(config.model, select_channel(config, observability),
                            config.spec);
}

int run_product(const std::string& config_path, const std::string& out_path,
                bool full) {
    ExperimentConfig config = load_config(config_path);
    GoalPomdp pomdp = build_from_config(config, config.observability);
    const GoalMdp& mdp = pomdp.mdp;

    std::size_t nonzero_t = 0;
    for (int a = 0; a < mdp.num_actions(); ++a)
        for (int x = 0; x < mdp.num_states(); ++x)
            nonzero_t += mdp.trans[a][x].size();
    std::size_t nonzero_o = 0;
    for (int a = 0; a < mdp.num_actions(); ++a)
        for (int x = 0; x < mdp.num_states(); ++x)
            for (int z = 0; z < pomdp.num_observations(); ++z)
                if (pomdp.obs_prob(a, x, z) > 0.0) ++nonzero_o;
    int goals = 0;
    for (int x = 0; x < mdp.num_states(); ++x)
        if (mdp.goal[x]) ++goals;

    std::cout << "product states: " << mdp.num_states() << "\n"
              << "actions: " << mdp.num_actions() << "\n"
              << "observations: " << pomdp.num_observations() << "\n"
              << "goal states: " << goals << "\n"
              << "nonzero transitions: " << nonzero_t << "\n"
              << "nonzero observation entries: " << nonzero_o << "\n";
    if (!out_path.empty())
        write_file(out_path, serialize_product(pomdp, full));
    return 0;
}

int run_solve_mdp(const std::string& config_path, double tol_override,
                  int max_iter_override, const std::string& out_path) {
    ExperimentConfig config = load_config(config_path);
    double tol = tol_override > 0 ? tol_override : config.tol;
    int max_iter = max_iter_override > 0 ? max_iter_override : config.max_iter;

    GoalMdp mdp = extract_goal_mdp(config.model, config.spec);
    MdpSolution solution = solve_mdp(mdp, tol, max_iter);

    if (!out_path.empty())
        write_values_tsv(out_path, mdp, solution);
    else
        std::cout << render_values_tsv(mdp, solution);
    std::cerr << "iterations: " << solution.iterations
              << " residual: " << solution.residual << "\n";
    return 0;
}

int run_simulate(const std::string& config_path, const std::string& setting,
                 int runs_override, std::int64_t seed_override,
                 int depth_override, const std::string& out_dir_override) {
    ExperimentConfig config = load_config(config_path);
    if (runs_override > 0) config.runs = runs_override;
    if (seed_override >= 0)
        config.seed = static_cast<std::uint64_t>(seed_override);
    if (depth_override > 0) config.depth = depth_override;
    if (!out_dir_override.empty()) config.output_dir = out_dir_override;

    std::string observability;
    if (setting == "fom")
        observability = "full";
    else if (setting == "fhm")
        observability = "hidden";
    else if (setting == "partial")
        observability = "custom";
    else
        throw ParseError("setting must be fom, partial, or fhm");

    ObservationModel channel = select_channel(config, observability);
    GoalPomdp pomdp = build_goal_pomdp(config.model, channel, config.spec);
    MdpSolution solution = solve_mdp(pomdp.mdp, config.tol, config.max_iter);
    PolicyHandle policy =
        setting == "fom"
            ? PolicyHandle::mdp_policy(pomdp, solution)
            : PolicyHandle::online_planner(pomdp, solution, config.depth);

    BatchStats stats = run_batch(config.model, channel, config.spec, policy,
                                 config.max_steps, config.runs, config.seed);
    Summary summary = summarize(stats, config.bins);

    std::filesystem::create_directories(config.output_dir);
    auto in_dir = [&](const char* name) {
        return (std::filesystem::path(config.output_dir) / name).string();
    };
    std::string report = render_report(summary);
    write_file(in_dir("report.txt"), report);
    write_episodes_csv(in_dir("episodes.csv"), stats);
    write_histogram_csv(in_dir("histogram.csv"), summary);
    write_stories_csv(in_dir("stories.csv"), summary);
    write_values_tsv(in_dir("values.tsv"), pomdp.mdp, solution);
    std::cout << report;
    return 0;
}

int run_equiv_check(const std::string& left_path,
                    const std::string& right_path) {
    Dfa left = parse_dfa(read_file(left_path));
    Dfa right = parse_dfa(read_file(right_path));
    BisimWitness witness = language_equivalent(left, right);
    if (witness.equivalent) {
        std::cout << "equivalent; bisimulation relation with "
                  << witness.relation.size() << " pairs:\n";
        for (const auto& [q1, q2] : witness.relation)
            std::cout << "  (" << left.state_name(q1) << ", "
                      << right.state_name(q2) << ")\n";
        return 0;
    }
    std::cout << "not equivalent; counterexample:";
    if (witness.counterexample.empty()) std::cout << " (empty word)";
    for (const auto& event : witness.counterexample)
        std::cout << " " << event;
    std::cout << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-prediction planning over stochastic event models "
                 "and regular story specifications"};
    app.require_subcommand(1);

    std::string config_path, model_path, out_path, out_dir;
    std::string expr, left_path, right_path, setting = "fom";
    std::vector<std::string> bindings;
    double tol = -1;
    int max_iter = -1, runs = -1, depth = -1;
    std::int64_t seed = -1;
    bool full_dump = false;

    auto* validate_cmd =
        app.add_subcommand("validate", "Check a model or config document");
    validate_cmd->add_option("--config", config_path, "Experiment config");
    validate_cmd->add_option("--model", model_path, "Model document");

    auto* mutate_cmd = app.add_subcommand(
        "mutate", "Evaluate a mutator expression over named specs");
    mutate_cmd->add_option("--expr", expr, "Mutator expression")->required();
    mutate_cmd->add_option("--spec", bindings,
                           "NAME=path binding (repeatable)");
    mutate_cmd->add_option("--out", out_path, "Output DFA document");

    auto* product_cmd =
        app.add_subcommand("product", "Build the goal product and summarize");
    product_cmd->add_option("--config", config_path)->required();
    product_cmd->add_option("--out", out_path, "Sparse product dump");
    product_cmd->add_flag("--full", full_dump,
                          "Include observation entries in the dump");

    auto* solve_cmd =
        app.add_subcommand("solve-mdp", "Value-iterate the goal MDP");
    solve_cmd->add_option("--config", config_path)->required();
    solve_cmd->add_option("--tol", tol, "Residual tolerance");
    solve_cmd->add_option("--max-iter", max_iter, "Iteration cap");
    solve_cmd->add_option("--out", out_path, "values.tsv path");

    auto* simulate_cmd =
        app.add_subcommand("simulate", "Run a seeded simulation batch");
    simulate_cmd->add_option("--config", config_path)->required();
    simulate_cmd->add_option("--setting", setting,
                             "fom | partial | fhm");
    simulate_cmd->add_option("--runs", runs, "Episode count override");
    simulate_cmd->add_option("--seed", seed, "Master seed override");
    simulate_cmd->add_option("--depth", depth, "Planner depth override");
    simulate_cmd->add_option("--out", out_dir, "Output directory override");

    auto* equiv_cmd = app.add_subcommand(
        "equiv-check", "Language-equivalence check between two DFAs");
    equiv_cmd->add_option("--left", left_path)->required();
    equiv_cmd->add_option("--right", right_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed())
            return run_validate(config_path, model_path);
        if (mutate_cmd->parsed()) return run_mutate(expr, bindings, out_path);
        if (product_cmd->parsed())
            return run_product(config_path, out_path, full_dump);
        if (solve_cmd->parsed())
            return run_solve_mdp(config_path, tol, max_iter, out_path);
        if (simulate_cmd->parsed())
            return run_simulate(config_path, setting, runs, seed, depth,
                                out_dir);
        if (equiv_cmd->parsed())
            return run_equiv_check(left_path, right_path);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const UnachievableError& e) {
        std::cerr << "unachievable: " << e.what() << "\n";
        return kExitUnachievable;
    } catch (const ConvergenceError& e) {
        std::cerr << "did not converge: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
