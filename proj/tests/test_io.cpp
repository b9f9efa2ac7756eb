#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>

#include "chronicle/equivalence.hpp"
#include "chronicle/errors.hpp"
#include "chronicle/io.hpp"
#include "chronicle/mutator_expr.hpp"
#include "chronicle/mutators.hpp"
#include "chronicle/simulate.hpp"
#include "oracles.hpp"

using namespace chronicle;

namespace {

const std::string kConfigDir = CHRONICLE_CONFIG_DIR;

Dfa contains_e() { return Dfa({"e"}, 2, 0, {false, true}, {1, 1}); }

}  // namespace

TEST_CASE("specification documents round-trip") {
    std::mt19937 gen(401);
    for (int trial = 0; trial < 20; ++trial) {
        Dfa dfa = oracles::random_dfa(gen, 5, 2);
        std::string text = serialize_dfa(dfa);
        Dfa back = parse_dfa(text);
        CHECK(language_equivalent(dfa, back).equivalent);
        // Serialization is canonical: a second pass is byte-identical.
        CHECK(serialize_dfa(back) == text);
    }
}

TEST_CASE("model documents round-trip with and without a channel") {
    std::mt19937 gen(409);
    EventModel m = oracles::random_event_model(gen, 4, 2);
    ObservationModel obs = fully_observable(m);

    ModelDocument plain = parse_model(serialize_model(m));
    CHECK(plain.model.states == m.states);
    CHECK(plain.model.events == m.events);
    CHECK(plain.model.labels == m.labels);
    CHECK_FALSE(plain.channel.has_value());
    for (int s = 0; s < m.num_states(); ++s)
        for (int t = 0; t < m.num_states(); ++t)
            CHECK(plain.model.prob(s, t) ==
                  doctest::Approx(m.prob(s, t)).epsilon(1e-12));

    ModelDocument with = parse_model(serialize_model(m, &obs));
    REQUIRE(with.channel.has_value());
    CHECK(with.channel->observations == obs.observations);
    CHECK(with.channel->emission == obs.emission);
    CHECK(serialize_model(with.model, &*with.channel) ==
          serialize_model(m, &obs));
}

TEST_CASE("malformed documents raise parse errors") {
    CHECK_THROWS_AS((void)parse_dfa("not json"), ParseError);
    CHECK_THROWS_AS((void)parse_dfa("{}"), ParseError);
    CHECK_THROWS_AS((void)parse_model("{\"states\": []}"), ParseError);
    CHECK_THROWS_AS((void)load_config(kConfigDir + "/does_not_exist.json"),
                    Error);
}

TEST_CASE("the shipped configurations load") {
    auto geometric = load_config(kConfigDir + "/geometric/config.json");
    CHECK(geometric.model.num_states() == 2);
    CHECK(geometric.observability == "full");
    CHECK(geometric.seed == 7);
    CHECK(validate(geometric.model).ok());

    auto oulu = load_config(kConfigDir + "/oulu/config.json");
    CHECK(oulu.model.num_states() == 7);
    CHECK(oulu.observability == "custom");
    REQUIRE(oulu.custom_channel.has_value());
    CHECK(validate(oulu.model, *oulu.custom_channel).ok());

    auto wedding = load_config(kConfigDir + "/wedding/config.json");
    CHECK(wedding.model.num_states() == 36);
    REQUIRE(wedding.custom_channel.has_value());
    CHECK(validate(wedding.model, *wedding.custom_channel).ok());
    // Spec alphabet must match the composed event set.
    CHECK(wedding.spec.alphabet() == wedding.model.events);
}

TEST_CASE("channel selection honors the observability override") {
    auto config = load_config(kConfigDir + "/oulu/config.json");
    CHECK(select_channel(config, "full").num_observations() ==
          config.model.num_states());
    CHECK(select_channel(config, "hidden").num_observations() == 1);
    CHECK(select_channel(config, "custom").observations ==
          config.custom_channel->observations);
    CHECK_THROWS_AS((void)select_channel(config, "nope"), ValidationError);
}

TEST_CASE("a bare name in a mutator expression is the bound automaton") {
    std::map<std::string, Dfa> env{{"D1", contains_e()}};
    Dfa result = parse_mutator_expression("D1", env);
    CHECK(language_equivalent(result, contains_e()).equivalent);
}

TEST_CASE("composed mutator expressions follow the operator semantics") {
    std::mt19937 gen(419);
    Dfa d1 = oracles::random_dfa(gen, 4, 2);
    Dfa d2 = oracles::random_dfa(gen, 4, 2);
    std::map<std::string, Dfa> env{{"D1", d1}, {"D2", d2}};
    Dfa result = parse_mutator_expression("MI(MS(D1), MS(D2))", env);
    for (const auto& w : oracles::all_words(2, 6))
        CHECK(result.accepts(w) == (oracles::supersequence_member(d1, w) &&
                                    oracles::supersequence_member(d2, w)));
}

TEST_CASE("zero-edit tolerance in an expression is the identity") {
    std::map<std::string, Dfa> env{{"D1", contains_e()}};
    Dfa result = parse_mutator_expression("ML(D1, 0)", env);
    CHECK(language_equivalent(result, contains_e()).equivalent);
}

TEST_CASE("the good-shots operator is reachable from expressions") {
    std::map<std::string, Dfa> env{{"D1", contains_e()}};
    Dfa result = parse_mutator_expression("MG(D1, e, eplus, 1)", env);
    CHECK(result.accepts(std::vector<std::string>{"eplus"}));
    CHECK_FALSE(result.accepts(std::vector<std::string>{"e"}));
}

TEST_CASE("expression errors carry positions and name diagnostics") {
    std::map<std::string, Dfa> env{{"D1", contains_e()}};
    CHECK_THROWS_AS((void)parse_mutator_expression("MI(D1)", env), ParseError);
    CHECK_THROWS_AS((void)parse_mutator_expression("MS(D1", env), ParseError);
    CHECK_THROWS_AS((void)parse_mutator_expression("NOPE", env), ParseError);
    try {
        (void)parse_mutator_expression("MS(D1) extra", env);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
}

TEST_CASE("product dumps list states, goals, and sparse rows") {
    auto config = load_config(kConfigDir + "/geometric/config.json");
    GoalPomdp pomdp =
        build_goal_pomdp(config.model, select_channel(config, "full"),
                         config.spec);
    std::string text = serialize_product(pomdp, true);
    CHECK(text.find("\"goal_states\"") != std::string::npos);
    CHECK(text.find("\"observation_probs\"") != std::string::npos);
    CHECK(text.find("s0,") != std::string::npos);
    // Canonical: repeated serialization is byte-identical.
    CHECK(serialize_product(pomdp, true) == text);
}

TEST_CASE("batch output files are byte-deterministic") {
    auto config = load_config(kConfigDir + "/geometric/config.json");
    GoalPomdp pomdp =
        build_goal_pomdp(config.model, select_channel(config, "full"),
                         config.spec);
    auto policy = PolicyHandle::mdp_policy(pomdp, solve_mdp(pomdp.mdp));
    auto channel = select_channel(config, "full");
    auto stats = run_batch(config.model, channel, config.spec, policy, 1000,
                           200, config.seed);
    auto summary = summarize(stats, config.bins);

    auto dump = [&](const std::string& tag) {
        std::string base = std::string("/tmp/chronicle_io_test_") + tag;
        write_episodes_csv(base + "_episodes.csv", stats);
        write_histogram_csv(base + "_histogram.csv", summary);
        write_stories_csv(base + "_stories.csv", summary);
        return read_file(base + "_episodes.csv") +
               read_file(base + "_histogram.csv") +
               read_file(base + "_stories.csv");
    };
    CHECK(dump("a") == dump("b"));
    std::string episodes =
        read_file("/tmp/chronicle_io_test_a_episodes.csv");
    CHECK(episodes.rfind("episode,seed,steps,success,story", 0) == 0);
    for (const char* tag : {"a", "b"})
        for (const char* kind : {"episodes", "histogram", "stories"})
            std::remove((std::string("/tmp/chronicle_io_test_") + tag + "_" +
                         kind + ".csv")
                            .c_str());
}
