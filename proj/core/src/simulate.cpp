#include "chronicle/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "chronicle/errors.hpp"

namespace chronicle {

namespace {

std::string join_events(const std::vector<std::string>& names,
                        const std::vector<int>& story) {
    std::string out;
    for (std::size_t i = 0; i < story.size(); ++i) {
        if (i) out += ' ';
        out += names[story[i]];
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    return out;
}

}  // namespace

TraceRecord run_episode(const EventModel& model, const ObservationModel& obs,
                        const Dfa& spec, const PolicyHandle& policy,
                        int max_steps, Rng& rng) {
    if (spec.alphabet() != model.events)
        throw ValidationError(
            "specification alphabet differs from the model event set");
    const GoalPomdp& pomdp = policy.pomdp();

    TraceRecord trace;
    int s = model.initial;
    int q = spec.initial();
    trace.dfa_path.push_back(q);
    Belief belief = initial_belief(pomdp.mdp);

    while (!spec.is_accepting(q) && trace.steps < max_steps) {
        int action = policy.act(belief);
        if (action < 0 || action >= model.num_events())
            throw ValidationError("policy returned an event outside the "
                                  "model alphabet");
        SampledStep step = sample_step(model, obs, s, rng);
        s = step.next_state;
        bool hit = model.has_event(s, action);
        if (hit) {
            trace.story.push_back(action);
            q = spec.step(q, action);
        }
        ++trace.steps;
        trace.dfa_path.push_back(q);
        trace.log.push_back({action, step.occurring_events, step.observation,
                             hit});

        int z = spec.is_accepting(q)
                    ? GoalPomdp::kGoalObservation
                    : pomdp.encode_observation(hit, step.observation);
        belief = belief_update(pomdp, belief, action, z);
    }
    trace.success = spec.is_accepting(q);
    return trace;
}

BatchStats run_batch(const EventModel& model, const ObservationModel& obs,
                     const Dfa& spec, const PolicyHandle& policy,
                     int max_steps, int runs, std::uint64_t master_seed) {
    BatchStats stats;
    stats.runs = runs;
    double sum = 0.0, sum_sq = 0.0;
    int successes = 0;
    for (int i = 0; i < runs; ++i) {
        std::uint64_t seed = split_seed(master_seed, i);
        Rng rng(seed);
        TraceRecord trace =
            run_episode(model, obs, spec, policy, max_steps, rng);
        std::string story = join_events(model.events, trace.story);
        stats.episodes.push_back(
            {i, seed, trace.steps, trace.success, story});
        if (trace.success) {
            ++successes;
            sum += trace.steps;
            sum_sq += static_cast<double>(trace.steps) * trace.steps;
            ++stats.step_counts[trace.steps];
            ++stats.story_distribution[story];
        } else {
            ++stats.failures;
        }
    }
    if (successes > 0) {
        stats.mean_steps = sum / successes;
        if (successes > 1) {
            double var = (sum_sq - sum * sum / successes) / (successes - 1);
            stats.std_error = std::sqrt(std::max(0.0, var) / successes);
        }
    }
    return stats;
}

Summary summarize(const BatchStats& stats, int bins) {
    if (bins < 1) throw ValidationError("summarize needs at least one bin");
    Summary summary;
    summary.mean_steps = stats.mean_steps;
    summary.std_error = stats.std_error;
    summary.runs = stats.runs;
    summary.failures = stats.failures;

    if (!stats.step_counts.empty()) {
        int lo = stats.step_counts.begin()->first;
        int hi = stats.step_counts.rbegin()->first;
        int width = std::max(1, (hi - lo + bins) / bins);  // whole steps
        for (int low = lo; low <= hi; low += width)
            summary.histogram.push_back({low, low + width - 1, 0});
        for (const auto& [steps, count] : stats.step_counts)
            summary.histogram[(steps - lo) / width].count += count;
    }

    summary.stories.assign(stats.story_distribution.begin(),
                           stats.story_distribution.end());
    std::stable_sort(summary.stories.begin(), summary.stories.end(),
                     [](const auto& a, const auto& b) {
                         return a.second > b.second;
                     });
    return summary;
}

void write_episodes_csv(const std::string& path, const BatchStats& stats) {
    auto out = open_out(path);
    out << "episode,seed,steps,success,story\n";
    for (const auto& row : stats.episodes)
        out << row.episode << ',' << row.seed << ',' << row.steps << ','
            << (row.success ? 1 : 0) << ',' << row.story << '\n';
}

void write_histogram_csv(const std::string& path, const Summary& summary) {
    auto out = open_out(path);
    out << "bin_low,bin_high,count\n";
    for (const auto& bin : summary.histogram)
        out << bin.low << ',' << bin.high << ',' << bin.count << '\n';
}

void write_stories_csv(const std::string& path, const Summary& summary) {
    auto out = open_out(path);
    out << "story,count\n";
    for (const auto& [story, count] : summary.stories)
        out << story << ',' << count << '\n';
}

std::string render_values_tsv(const GoalMdp& mdp,
                              const MdpSolution& solution) {
    std::string out = "state\tvalue\taction\n";
    for (int x = 0; x < mdp.num_states(); ++x) {
        out += mdp.state_name(x);
        out += '\t';
        out += std::isinf(solution.values[x])
                   ? "inf"
                   : format_double(solution.values[x]);
        out += '\t';
        out += solution.policy[x] >= 0 ? mdp.actions[solution.policy[x]]
                                       : std::string("-");
        out += '\n';
    }
    return out;
}

void write_values_tsv(const std::string& path, const GoalMdp& mdp,
                      const MdpSolution& solution) {
    auto out = open_out(path);
    out << render_values_tsv(mdp, solution);
}

std::string render_report(const Summary& summary) {
    std::string out;
    out += "runs: " + std::to_string(summary.runs) + "\n";
    out += "failures (step cap reached): " +
           std::to_string(summary.failures) + "\n";
    out += "mean steps: " + format_double(summary.mean_steps) + "\n";
    out += "std error: " + format_double(summary.std_error) + "\n\n";

    int max_count = 1;
    for (const auto& bin : summary.histogram)
        max_count = std::max(max_count, bin.count);
    for (const auto& bin : summary.histogram) {
        char label[64];
        std::snprintf(label, sizeof label, "%5d-%-5d %6d ", bin.low, bin.high,
                      bin.count);
        out += label;
        out.append(static_cast<std::size_t>(50.0 * bin.count / max_count),
                   '#');
        out += '\n';
    }
    out += "\nstories:\n";
    for (const auto& [story, count] : summary.stories)
        out += "  " + std::to_string(count) + "  " +
               (story.empty() ? "(empty)" : story) + "\n";
    return out;
}

}  // namespace chronicle
