#ifndef CHRONICLE_EVENT_MODEL_HPP
#define CHRONICLE_EVENT_MODEL_HPP

#include <functional>
#include <string>
#include <vector>

#include "chronicle/rng.hpp"

namespace chronicle {

// Row sums within this tolerance of 1 are renormalized; beyond it the
// model fails validation.
inline constexpr double kRowSumTolerance = 1e-9;

/// Labeled Markov chain generating events: states, a row-stochastic
/// transition matrix, an initial state, and per-state sets of
/// simultaneously occurring events. The initial state must carry no events.
struct EventModel {
    std::vector<std::string> states;
    int initial = 0;
    std::vector<std::string> events;      // sorted; doubles as action order
    std::vector<std::vector<int>> labels; // per state, sorted event indices
    std::vector<double> transition;       // row-major |S| x |S|

    int num_states() const { return static_cast<int>(states.size()); }
    int num_events() const { return static_cast<int>(events.size()); }
    double prob(int from, int to) const {
        return transition[from * states.size() + to];
    }
    bool has_event(int state, int event) const;
    int event_index(const std::string& name) const;  // ValidationError if unknown

    // Renormalizes rows within kRowSumTolerance. Call after construction.
    void normalize();
};

/// Emission channel over event-model states.
struct ObservationModel {
    std::vector<std::string> observations;
    std::vector<double> emission;  // row-major |S| x |Y|

    int num_observations() const {
        return static_cast<int>(observations.size());
    }
    double prob(int state, int obs) const {
        return emission[state * observations.size() + obs];
    }
    void normalize();
};

struct ValidationReport {
    std::vector<std::string> issues;
    bool ok() const { return issues.empty(); }
};

// Lists every violated invariant; empty report iff the pair is valid.
ValidationReport validate(const EventModel& model, const ObservationModel& obs);
ValidationReport validate(const EventModel& model);

// Identity channel: Y = S, emission is the identity matrix.
ObservationModel fully_observable(const EventModel& model);

// Single uninformative observation emitted everywhere.
ObservationModel fully_hidden(const EventModel& model);

struct SampledStep {
    int next_state;
    std::vector<int> occurring_events;
    int observation;
};

SampledStep sample_step(const EventModel& model, const ObservationModel& obs,
                        int state, Rng& rng);

/// Rule for composing several event models into a joint one.
/// Per-part events may be renamed into joint events (unrenamed events are
/// dropped), and tuples of simultaneous per-part events may emit extra
/// joint events (e.g. two guests dancing at once yields a shared-dance
/// event).
struct MergeRule {
    struct Rename {
        int part;
        std::string event;  // event name within that part
        std::string as;     // joint event name
    };
    struct Joint {
        std::vector<std::pair<int, std::string>> require;  // (part, event)
        std::string emit;
    };
    std::vector<Rename> renames;
    std::vector<Joint> joints;
};

// Cartesian product of the parts: joint states are state tuples, transition
// probabilities multiply, labels follow the merge rule.
EventModel compose(const std::vector<EventModel>& parts,
                   const MergeRule& rule);

}  // namespace chronicle

#endif
