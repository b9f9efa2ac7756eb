#include "chronicle/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "chronicle/errors.hpp"
#include "chronicle/mutator_expr.hpp"

namespace chronicle {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError("document is not valid JSON");
    return doc;
}

const json& field(const json& doc, const char* name) {
    auto it = doc.find(name);
    if (it == doc.end())
        throw ParseError(std::string("missing field: ") + name);
    return *it;
}

std::vector<std::string> string_list(const json& value, const char* what) {
    if (!value.is_array())
        throw ParseError(std::string(what) + " must be a list");
    std::vector<std::string> out;
    for (const auto& item : value) {
        if (!item.is_string())
            throw ParseError(std::string(what) + " must contain strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

int index_of(const std::vector<std::string>& names, const std::string& name,
             const char* what) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    throw ParseError(std::string("unknown ") + what + ": " + name);
}

}  // namespace

std::string serialize_dfa(const Dfa& dfa) {
    json doc;
    doc["alphabet"] = dfa.alphabet();
    doc["states"] = dfa.state_names();
    doc["initial"] = dfa.state_name(dfa.initial());
    json accepting = json::array();
    for (int q = 0; q < dfa.num_states(); ++q)
        if (dfa.is_accepting(q)) accepting.push_back(dfa.state_name(q));
    doc["accepting"] = std::move(accepting);
    json transitions = json::array();
    for (int q = 0; q < dfa.num_states(); ++q)
        for (int e = 0; e < dfa.num_symbols(); ++e)
            transitions.push_back({{"from", dfa.state_name(q)},
                                   {"event", dfa.alphabet()[e]},
                                   {"to", dfa.state_name(dfa.step(q, e))}});
    doc["transitions"] = std::move(transitions);
    return doc.dump(2) + "\n";
}

Dfa parse_dfa(const std::string& text) {
    json doc = parse_json(text);
    std::vector<std::tuple<std::string, std::string, std::string>> transitions;
    for (const auto& t : field(doc, "transitions"))
        transitions.emplace_back(field(t, "from").get<std::string>(),
                                 field(t, "event").get<std::string>(),
                                 field(t, "to").get<std::string>());
    return Dfa::from_transitions(
        string_list(field(doc, "alphabet"), "alphabet"),
        string_list(field(doc, "states"), "states"),
        field(doc, "initial").get<std::string>(),
        string_list(field(doc, "accepting"), "accepting"), transitions);
}

std::string serialize_model(const EventModel& model,
                            const ObservationModel* obs) {
    json doc;
    doc["states"] = model.states;
    doc["initial"] = model.states[model.initial];
    doc["events"] = model.events;
    json labels = json::object();
    for (int s = 0; s < model.num_states(); ++s) {
        if (model.labels[s].empty()) continue;
        json events = json::array();
        for (int e : model.labels[s]) events.push_back(model.events[e]);
        labels[model.states[s]] = std::move(events);
    }
    doc["labels"] = std::move(labels);
    json transitions = json::array();
    for (int from = 0; from < model.num_states(); ++from)
        for (int to = 0; to < model.num_states(); ++to)
            if (model.prob(from, to) > 0.0)
                transitions.push_back({{"from", model.states[from]},
                                       {"to", model.states[to]},
                                       {"prob", model.prob(from, to)}});
    doc["transitions"] = std::move(transitions);
    if (obs != nullptr) {
        doc["observations"] = obs->observations;
        json emissions = json::array();
        for (int s = 0; s < model.num_states(); ++s)
            for (int y = 0; y < obs->num_observations(); ++y)
                if (obs->prob(s, y) > 0.0)
                    emissions.push_back({{"state", model.states[s]},
                                         {"obs", obs->observations[y]},
                                         {"prob", obs->prob(s, y)}});
        doc["emissions"] = std::move(emissions);
    }
    return doc.dump(2) + "\n";
}

ModelDocument parse_model(const std::string& text) {
    json doc = parse_json(text);
    ModelDocument out;
    EventModel& model = out.model;
    model.states = string_list(field(doc, "states"), "states");
    model.events = string_list(field(doc, "events"), "events");
    std::sort(model.events.begin(), model.events.end());
    model.initial = index_of(model.states,
                             field(doc, "initial").get<std::string>(),
                             "state");
    model.labels.resize(model.states.size());
    if (doc.contains("labels")) {
        for (const auto& [state, events] : doc["labels"].items()) {
            int s = index_of(model.states, state, "state");
            for (const auto& name : string_list(events, "label list"))
                model.labels[s].push_back(model.event_index(name));
            std::sort(model.labels[s].begin(), model.labels[s].end());
        }
    }
    const int n = model.num_states();
    model.transition.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (const auto& t : field(doc, "transitions")) {
        int from = index_of(model.states,
                            field(t, "from").get<std::string>(), "state");
        int to = index_of(model.states, field(t, "to").get<std::string>(),
                          "state");
        model.transition[from * n + to] = field(t, "prob").get<double>();
    }
    model.normalize();

    if (doc.contains("observations")) {
        ObservationModel channel;
        channel.observations =
            string_list(doc["observations"], "observations");
        channel.emission.assign(
            static_cast<std::size_t>(n) * channel.observations.size(), 0.0);
        for (const auto& e : field(doc, "emissions")) {
            int s = index_of(model.states,
                             field(e, "state").get<std::string>(), "state");
            int y = index_of(channel.observations,
                             field(e, "obs").get<std::string>(),
                             "observation");
            channel.emission[s * channel.observations.size() + y] =
                field(e, "prob").get<double>();
        }
        channel.normalize();
        out.channel = std::move(channel);
    }
    return out;
}

std::string serialize_product(const GoalPomdp& pomdp, bool include_obs) {
    const GoalMdp& mdp = pomdp.mdp;
    json doc;
    json states = json::array();
    for (int x = 0; x < mdp.num_states(); ++x) states.push_back(mdp.state_name(x));
    doc["states"] = std::move(states);
    doc["actions"] = mdp.actions;
    doc["initial"] = mdp.state_name(mdp.initial);
    json goals = json::array();
    for (int x = 0; x < mdp.num_states(); ++x)
        if (mdp.goal[x]) goals.push_back(mdp.state_name(x));
    doc["goal_states"] = std::move(goals);

    json transitions = json::array();
    for (int a = 0; a < mdp.num_actions(); ++a)
        for (int x = 0; x < mdp.num_states(); ++x)
            for (const auto& [target, prob] : mdp.trans[a][x])
                transitions.push_back({{"from", mdp.state_name(x)},
                                       {"action", mdp.actions[a]},
                                       {"to", mdp.state_name(target)},
                                       {"prob", prob}});
    doc["transitions"] = std::move(transitions);

    if (include_obs) {
        json observations = json::array();
        for (int z = 0; z < pomdp.num_observations(); ++z)
            observations.push_back(pomdp.observation_name(z));
        doc["observations"] = std::move(observations);
        json rows = json::array();
        for (int a = 0; a < mdp.num_actions(); ++a)
            for (int x = 0; x < mdp.num_states(); ++x)
                for (int z = 0; z < pomdp.num_observations(); ++z) {
                    double p = pomdp.obs_prob(a, x, z);
                    if (p > 0.0)
                        rows.push_back({{"action", mdp.actions[a]},
                                        {"state", mdp.state_name(x)},
                                        {"observation",
                                         pomdp.observation_name(z)},
                                        {"prob", p}});
                }
        doc["observation_probs"] = std::move(rows);
    }
    return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << content;
}

namespace {

MergeRule parse_merge_rule(const json& doc) {
    MergeRule rule;
    if (doc.contains("rename"))
        for (const auto& r : doc["rename"])
            rule.renames.push_back({field(r, "part").get<int>(),
                                    field(r, "event").get<std::string>(),
                                    field(r, "as").get<std::string>()});
    if (doc.contains("joint"))
        for (const auto& j : doc["joint"]) {
            MergeRule::Joint joint;
            for (const auto& req : field(j, "require"))
                joint.require.emplace_back(
                    field(req, "part").get<int>(),
                    field(req, "event").get<std::string>());
            joint.emit = field(j, "emit").get<std::string>();
            rule.joints.push_back(std::move(joint));
        }
    return rule;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    namespace fs = std::filesystem;
    json doc = parse_json(read_file(path));
    fs::path base = fs::path(path).parent_path();
    auto resolve = [&](const std::string& rel) {
        return (base / rel).string();
    };

    std::optional<ModelDocument> model_doc;
    if (doc.contains("model")) {
        model_doc =
            parse_model(read_file(resolve(doc["model"].get<std::string>())));
    } else if (doc.contains("compose")) {
        const json& comp = doc["compose"];
        std::vector<EventModel> parts;
        for (const auto& part : field(comp, "parts"))
            parts.push_back(
                parse_model(read_file(resolve(part.get<std::string>())))
                    .model);
        EventModel joint =
            compose(parts, parse_merge_rule(field(comp, "merge")));

        // Optional deterministic channel keyed on a per-part state, e.g.
        // "observe whether guest 1 is in its smoke state".
        std::optional<ObservationModel> channel;
        if (comp.contains("channel")) {
            const json& chan = comp["channel"];
            ObservationModel built;
            built.observations =
                string_list(field(chan, "observations"), "observations");
            std::string fallback = field(chan, "default").get<std::string>();
            int fallback_y =
                index_of(built.observations, fallback, "observation");
            const int n = joint.num_states();
            built.emission.assign(
                static_cast<std::size_t>(n) * built.observations.size(), 0.0);
            for (int x = 0; x < n; ++x) {
                int y = fallback_y;
                for (const auto& rule : field(chan, "emit")) {
                    int part = field(rule, "part").get<int>();
                    if (part < 0 || part >= static_cast<int>(parts.size()))
                        throw ParseError("channel rule references unknown part");
                    // Joint state names are part names joined with '|'.
                    std::string joint_name = joint.states[x];
                    std::vector<std::string> pieces;
                    std::size_t start = 0;
                    for (std::size_t pos;
                         (pos = joint_name.find('|', start)) !=
                         std::string::npos;
                         start = pos + 1)
                        pieces.push_back(joint_name.substr(start, pos - start));
                    pieces.push_back(joint_name.substr(start));
                    if (pieces[part] == field(rule, "state").get<std::string>())
                        y = index_of(built.observations,
                                     field(rule, "obs").get<std::string>(),
                                     "observation");
                }
                built.emission[x * built.observations.size() + y] = 1.0;
            }
            channel = std::move(built);
        }
        model_doc = ModelDocument{std::move(joint), std::move(channel)};
    } else {
        throw ParseError("config needs either 'model' or 'compose'");
    }

    ExperimentConfig config{.model = std::move(model_doc->model),
                            .custom_channel = std::move(model_doc->channel),
                            .observability = "full",
                            .spec = Dfa({}, 1, 0, {false}, {})};

    if (doc.contains("observability"))
        config.observability = doc["observability"].get<std::string>();
    if (config.observability != "full" && config.observability != "hidden" &&
        config.observability != "custom")
        throw ParseError("observability must be full, hidden, or custom");
    if (config.observability == "custom" && !config.custom_channel)
        throw ParseError(
            "custom observability requires observations/emissions in the "
            "model document");

    if (doc.contains("spec")) {
        config.spec = parse_dfa(read_file(resolve(doc["spec"].get<std::string>())));
    } else if (doc.contains("specs") && doc.contains("mutator")) {
        std::map<std::string, Dfa> env;
        for (const auto& [name, rel] : doc["specs"].items())
            env.emplace(name,
                        parse_dfa(read_file(resolve(rel.get<std::string>()))));
        config.spec =
            parse_mutator_expression(doc["mutator"].get<std::string>(), env);
    } else {
        throw ParseError("config needs 'spec' or 'specs' plus 'mutator'");
    }

    if (doc.contains("solver")) {
        const json& solver = doc["solver"];
        if (solver.contains("tol")) config.tol = solver["tol"].get<double>();
        if (solver.contains("max_iter"))
            config.max_iter = solver["max_iter"].get<int>();
        if (solver.contains("depth"))
            config.depth = solver["depth"].get<int>();
    }
    if (doc.contains("simulation")) {
        const json& sim = doc["simulation"];
        if (sim.contains("runs")) config.runs = sim["runs"].get<int>();
        if (sim.contains("max_steps"))
            config.max_steps = sim["max_steps"].get<int>();
        if (sim.contains("seed"))
            config.seed = sim["seed"].get<std::uint64_t>();
        if (sim.contains("bins")) config.bins = sim["bins"].get<int>();
    }
    if (doc.contains("output"))
        config.output_dir = resolve(doc["output"].get<std::string>());
    return config;
}

ObservationModel select_channel(const ExperimentConfig& config,
                                const std::string& observability) {
    if (observability == "full") return fully_observable(config.model);
    if (observability == "hidden") return fully_hidden(config.model);
    if (observability == "custom") {
        if (!config.custom_channel)
            throw ValidationError("config has no custom channel");
        return *config.custom_channel;
    }
    throw ValidationError("unknown observability: " + observability);
}

}  // namespace chronicle
