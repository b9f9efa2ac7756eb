#include "chronicle/event_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "chronicle/errors.hpp"

namespace chronicle {

namespace {

// Renormalize rows whose sums are within tolerance of 1; leave the rest
// for validate() to report.
void normalize_rows(std::vector<double>& matrix, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (int c = 0; c < cols; ++c) sum += matrix[r * cols + c];
        if (sum > 0.0 && std::abs(sum - 1.0) <= kRowSumTolerance &&
            sum != 1.0) {
            for (int c = 0; c < cols; ++c) matrix[r * cols + c] /= sum;
        }
    }
}

void check_rows(const std::vector<double>& matrix, int rows, int cols,
                const std::vector<std::string>& row_names, const char* what,
                ValidationReport& report) {
    for (int r = 0; r < rows; ++r) {
        double sum = 0.0;
        bool negative = false;
        for (int c = 0; c < cols; ++c) {
            double p = matrix[r * cols + c];
            if (p < 0.0) negative = true;
            sum += p;
        }
        if (negative)
            report.issues.push_back(std::string(what) +
                                    " has a negative probability in row " +
                                    row_names[r]);
        if (std::abs(sum - 1.0) > kRowSumTolerance)
            report.issues.push_back(std::string(what) + " row for state " +
                                    row_names[r] + " sums to " +
                                    std::to_string(sum));
    }
}

}  // namespace

bool EventModel::has_event(int state, int event) const {
    const auto& l = labels[state];
    return std::binary_search(l.begin(), l.end(), event);
}

int EventModel::event_index(const std::string& name) const {
    auto it = std::lower_bound(events.begin(), events.end(), name);
    if (it == events.end() || *it != name)
        throw ValidationError("unknown event: " + name);
    return static_cast<int>(it - events.begin());
}

void EventModel::normalize() {
    normalize_rows(transition, num_states(), num_states());
}

void ObservationModel::normalize() {
    int rows = static_cast<int>(emission.size()) /
               std::max(1, num_observations());
    normalize_rows(emission, rows, num_observations());
}

ValidationReport validate(const EventModel& model) {
    ValidationReport report;
    const int n = model.num_states();
    if (n == 0) {
        report.issues.push_back("model has no states");
        return report;
    }
    if (model.initial < 0 || model.initial >= n) {
        report.issues.push_back("initial state out of range");
        return report;
    }
    if (!std::is_sorted(model.events.begin(), model.events.end()))
        report.issues.push_back("event list is not sorted");
    if (static_cast<int>(model.labels.size()) != n)
        report.issues.push_back("label table size does not match state count");
    if (static_cast<int>(model.transition.size()) != n * n)
        report.issues.push_back("transition matrix is not |S| x |S|");
    if (!report.ok()) return report;

    check_rows(model.transition, n, n, model.states, "transition matrix",
               report);
    if (!model.labels[model.initial].empty())
        report.issues.push_back("initial state " +
                                model.states[model.initial] +
                                " must carry no events");
    for (int s = 0; s < n; ++s)
        for (int e : model.labels[s])
            if (e < 0 || e >= model.num_events())
                report.issues.push_back("state " + model.states[s] +
                                        " labeled with unknown event index");
    return report;
}

ValidationReport validate(const EventModel& model,
                          const ObservationModel& obs) {
    ValidationReport report = validate(model);
    const int n = model.num_states();
    if (obs.num_observations() == 0) {
        report.issues.push_back("observation model has no observations");
        return report;
    }
    if (static_cast<int>(obs.emission.size()) != n * obs.num_observations()) {
        report.issues.push_back("emission matrix is not |S| x |Y|");
        return report;
    }
    check_rows(obs.emission, n, obs.num_observations(), model.states,
               "emission matrix", report);
    return report;
}

ObservationModel fully_observable(const EventModel& model) {
    const int n = model.num_states();
    ObservationModel obs;
    obs.observations = model.states;
    obs.emission.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int s = 0; s < n; ++s) obs.emission[s * n + s] = 1.0;
    return obs;
}

ObservationModel fully_hidden(const EventModel& model) {
    ObservationModel obs;
    obs.observations = {"none"};
    obs.emission.assign(model.num_states(), 1.0);
    return obs;
}

SampledStep sample_step(const EventModel& model, const ObservationModel& obs,
                        int state, Rng& rng) {
    if (state < 0 || state >= model.num_states())
        throw ValidationError("sample_step from a state outside the model");
    const int n = model.num_states();
    int next = rng.categorical(
        std::span<const double>(model.transition.data() + state * n, n));
    int y = rng.categorical(std::span<const double>(
        obs.emission.data() + next * obs.num_observations(),
        obs.num_observations()));
    return {next, model.labels[next], y};
}

EventModel compose(const std::vector<EventModel>& parts,
                   const MergeRule& rule) {
    if (parts.empty()) throw ValidationError("compose needs at least one part");
    for (const auto& r : rule.renames)
        if (r.part < 0 || r.part >= static_cast<int>(parts.size()))
            throw ValidationError("merge rename references unknown part");
    for (const auto& j : rule.joints)
        for (const auto& [part, event] : j.require)
            if (part < 0 || part >= static_cast<int>(parts.size()))
                throw ValidationError("merge joint references unknown part");

    // Enumerate joint states as tuples, row-major over the parts.
    int total = 1;
    for (const auto& p : parts) total *= p.num_states();
    auto decompose = [&](int joint) {
        std::vector<int> tuple(parts.size());
        for (int i = static_cast<int>(parts.size()) - 1; i >= 0; --i) {
            tuple[i] = joint % parts[i].num_states();
            joint /= parts[i].num_states();
        }
        return tuple;
    };

    std::set<std::string> event_set;
    for (const auto& r : rule.renames) event_set.insert(r.as);
    for (const auto& j : rule.joints) event_set.insert(j.emit);

    EventModel out;
    out.events.assign(event_set.begin(), event_set.end());
    out.states.reserve(total);
    out.labels.resize(total);
    out.transition.assign(static_cast<std::size_t>(total) * total, 0.0);

    for (int x = 0; x < total; ++x) {
        auto tuple = decompose(x);
        std::string name;
        for (std::size_t i = 0; i < tuple.size(); ++i)
            name += (i ? "|" : "") + parts[i].states[tuple[i]];
        out.states.push_back(name);

        std::set<int> label;
        auto part_has = [&](int part, const std::string& event) {
            const auto& p = parts[part];
            auto it = std::lower_bound(p.events.begin(), p.events.end(), event);
            if (it == p.events.end() || *it != event) return false;
            return p.has_event(tuple[part],
                               static_cast<int>(it - p.events.begin()));
        };
        for (const auto& r : rule.renames)
            if (part_has(r.part, r.event))
                label.insert(out.event_index(r.as));
        for (const auto& j : rule.joints) {
            bool all = true;
            for (const auto& [part, event] : j.require)
                if (!part_has(part, event)) all = false;
            if (all && !j.require.empty())
                label.insert(out.event_index(j.emit));
        }
        out.labels[x].assign(label.begin(), label.end());

        for (int y = 0; y < total; ++y) {
            auto target = decompose(y);
            double p = 1.0;
            for (std::size_t i = 0; i < parts.size(); ++i)
                p *= parts[i].prob(tuple[i], target[i]);
            out.transition[static_cast<std::size_t>(x) * total + y] = p;
        }
    }

    int joint_initial = 0;
    for (const auto& p : parts)
        joint_initial = joint_initial * p.num_states() + p.initial;
    out.initial = joint_initial;
    out.normalize();
    return out;
}

}  // namespace chronicle
