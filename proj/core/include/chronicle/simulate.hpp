#ifndef CHRONICLE_SIMULATE_HPP
#define CHRONICLE_SIMULATE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chronicle/planner.hpp"

namespace chronicle {

struct StepLog {
    int predicted;              // action (event index)
    std::vector<int> occurred;  // events at the entered state
    int observation;            // channel output index
    bool hit;
};

/// One simulated episode of the capture semantics: the story recorded, the
/// DFA states visited, and a per-step log sufficient to replay the run.
struct TraceRecord {
    int steps = 0;
    std::vector<int> story;     // recorded events; |story| <= steps
    std::vector<int> dfa_path;  // q_0 .. q_k
    bool success = false;
    std::vector<StepLog> log;
};

struct EpisodeRow {
    int episode;
    std::uint64_t seed;
    int steps;
    bool success;
    std::string story;  // space-separated event names
};

struct BatchStats {
    int runs = 0;
    int failures = 0;  // episodes that hit the step cap
    double mean_steps = 0.0;  // over successful episodes
    double std_error = 0.0;
    std::map<int, int> step_counts;  // successful episodes, by step count
    std::map<std::string, int> story_distribution;
    std::vector<EpisodeRow> episodes;
};

inline constexpr int kDefaultMaxSteps = 10'000;

// One episode under the capture semantics: the policy predicts an event,
// the model advances, the story and DFA state move exactly when the
// prediction matched an occurring event, and the belief follows the
// filter. Stops on acceptance or at max_steps.
TraceRecord run_episode(const EventModel& model, const ObservationModel& obs,
                        const Dfa& spec, const PolicyHandle& policy,
                        int max_steps, Rng& rng);

// Seeded batch: episode i runs on an independent stream derived from
// (master_seed, i), so results are order-independent and reproducible.
BatchStats run_batch(const EventModel& model, const ObservationModel& obs,
                     const Dfa& spec, const PolicyHandle& policy,
                     int max_steps, int runs, std::uint64_t master_seed);

struct HistogramBin {
    int low, high;  // inclusive step range
    int count;
};

struct Summary {
    std::vector<HistogramBin> histogram;
    std::vector<std::pair<std::string, int>> stories;  // by count, descending
    double mean_steps;
    double std_error;
    int runs;
    int failures;
};

Summary summarize(const BatchStats& stats, int bins);

// Output files; all writers are byte-deterministic for identical inputs.
void write_episodes_csv(const std::string& path, const BatchStats& stats);
void write_histogram_csv(const std::string& path, const Summary& summary);
void write_stories_csv(const std::string& path, const Summary& summary);
void write_values_tsv(const std::string& path, const GoalMdp& mdp,
                      const MdpSolution& solution);
std::string render_values_tsv(const GoalMdp& mdp, const MdpSolution& solution);
std::string render_report(const Summary& summary);

}  // namespace chronicle

#endif
