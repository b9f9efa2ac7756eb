#ifndef CHRONICLE_IO_HPP
#define CHRONICLE_IO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "chronicle/dfa.hpp"
#include "chronicle/event_model.hpp"
#include "chronicle/planner.hpp"
#include "chronicle/product.hpp"

namespace chronicle {

// Textual (JSON) documents. Serialization is canonical: object keys are
// sorted, arrays keep construction order, so serialize(parse(x)) is a
// fixed point at the byte level.

std::string serialize_dfa(const Dfa& dfa);
Dfa parse_dfa(const std::string& text);  // throws ParseError / ValidationError

std::string serialize_model(const EventModel& model,
                            const ObservationModel* obs = nullptr);
struct ModelDocument {
    EventModel model;
    std::optional<ObservationModel> channel;  // present iff the doc has one
};
ModelDocument parse_model(const std::string& text);

// Sparse dump of a built product: states, actions, goal set, nonzero
// transition triples, and (for the POMDP form) nonzero observation triples.
std::string serialize_product(const GoalPomdp& pomdp, bool include_obs);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// A fully loaded experiment: model, channel choice, specification, solver
/// and simulation settings. Paths in the config document are resolved
/// relative to the document's directory.
struct ExperimentConfig {
    EventModel model;
    std::optional<ObservationModel> custom_channel;
    std::string observability;  // "full" | "hidden" | "custom"
    Dfa spec;
    double tol = 1e-9;
    int max_iter = 1'000'000;
    int depth = kDefaultPlanDepth;
    int runs = 1000;
    int max_steps = 10'000;
    std::uint64_t seed = 0;
    int bins = 20;
    std::string output_dir = "out";
};

ExperimentConfig load_config(const std::string& path);

// Channel selected by the config's observability field (or an override).
ObservationModel select_channel(const ExperimentConfig& config,
                                const std::string& observability);

}  // namespace chronicle

#endif
