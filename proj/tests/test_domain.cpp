#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "support.hpp"
#include "xmarl/domain.hpp"
#include "xmarl/envs.hpp"

using namespace xmarl;

TEST_CASE("encode_agent_state sets one bit per satisfied predicate") {
    const auto d = sr_domain(3);
    const auto& schema = d.schema();
    // row, col, sense_victim, sense_fire, sense_obstacle, victim_done, fire_done, obstacle_done
    ConcreteAgentState idle{0, 0, 0, 0, 0, 0, 0, 0};
    CHECK(encode_agent_state(idle, schema).bits == 0);

    // UAV on (1,1), right above the victim at (2,1): only victim_detect holds.
    ConcreteAgentState next_to_victim{1, 1, 1, 0, 0, 0, 0, 0};
    CHECK(encode_agent_state(next_to_victim, schema).bits == 1);

    ConcreteAgentState finished{0, 5, 0, 0, 0, 1, 1, 1};
    const auto bits = encode_agent_state(finished, schema).bits;
    CHECK(bits == ((1u << 1) | (1u << 3) | (1u << 5)));
    CHECK((bits & schema.task_mask()) == bits);
}

TEST_CASE("encode rejects states of the wrong shape") {
    const auto d = sr_domain(3);
    ConcreteAgentState short_state{0, 0, 1};
    CHECK_THROWS_AS(encode_agent_state(short_state, d.schema()), SchemaError);
    CHECK_THROWS_AS(d.encode({{0, 0, 0, 0, 0, 0, 0, 0}}), SchemaError);
}

TEST_CASE("predicate thresholds") {
    FeatureSchema schema({"level"}, {{"strong", "level", 3, "is strong", "is weak", ""}}, {});
    CHECK(schema.encode(std::vector<std::int32_t>{2}).bits == 0);
    CHECK(schema.encode(std::vector<std::int32_t>{3}).bits == 1);
}

TEST_CASE("variable_index arithmetic") {
    const std::vector<std::size_t> agents{0, 1, 2};
    const std::vector<std::size_t> features{0, 1, 2, 3, 4, 5};
    CHECK(variable_index(0, 0, agents, features) == 0);
    CHECK(variable_index(1, 2, agents, features) == 8);
    CHECK(variable_index(2, 5, agents, features) == 17);
    CHECK_THROWS_AS(variable_index(3, 0, agents, features), PreconditionError);
    CHECK_THROWS_AS(variable_index(0, 6, agents, features), PreconditionError);
}

TEST_CASE("variable_index is a bijection onto [0, |agents|*|F|)") {
    const std::vector<std::size_t> agents{4, 1, 3};
    const std::vector<std::size_t> features{5, 0, 2, 1};
    std::set<std::size_t> seen;
    for (auto a : agents)
        for (auto f : features) {
            const auto v = variable_index(a, f, agents, features);
            CHECK(v < agents.size() * features.size());
            seen.insert(v);
        }
    CHECK(seen.size() == agents.size() * features.size());
}

TEST_CASE("bit encoding round-trips through predicate valuations") {
    const auto d = sr_domain(3);
    const auto& schema = d.schema();
    for (std::uint32_t b = 0; b < (1u << schema.size()); ++b) {
        ConcreteAgentState x(schema.state_fields().size(), 0);
        for (std::size_t i = 0; i < schema.size(); ++i) {
            const auto& p = schema.predicate(i);
            const auto field = std::find(schema.state_fields().begin(), schema.state_fields().end(), p.field) -
                               schema.state_fields().begin();
            if ((b >> i) & 1u) x[static_cast<std::size_t>(field)] = p.threshold;
        }
        CHECK(encode_agent_state(x, schema).bits == b);
    }
}

TEST_CASE("relevance entries contain their own action") {
    for (const auto& id : builtin_domain_ids()) {
        const auto d = builtin_domain(id);
        for (const auto& [key, entry] : d.knowledge().entries()) {
            CHECK_FALSE(entry.action_sets.empty());
            std::set<std::size_t> agents;
            for (const auto& set : entry.action_sets) {
                CHECK(std::binary_search(set.begin(), set.end(), key));
                for (const auto& m : set) agents.insert(m.agent);
            }
            CHECK(std::vector<std::size_t>(agents.begin(), agents.end()) == entry.agents);
        }
        // Every agent action has an entry.
        for (std::size_t i = 0; i < d.agent_count(); ++i)
            for (auto a : d.agent(i).alphabet) CHECK(d.knowledge().find({i, a}) != nullptr);
    }
}

TEST_CASE("relevance knowledge rejects sets missing the key") {
    RelevanceKnowledge k;
    CHECK_THROWS_AS(k.add({0, 0}, {0}, {{{1, 0}}}), SchemaError);
    CHECK_THROWS_AS(k.add({0, 0}, {0}, {}), SchemaError);
}

TEST_CASE("agent:action parsing") {
    const auto d = sr_domain(3);
    const auto a = d.parse_agent_action("UGV_2:remove_obstacle");
    CHECK(a.agent == 2);
    CHECK(d.action(a.action).id == "remove_obstacle");
    CHECK(d.format_agent_action(a) == "UGV_2:remove_obstacle");
    CHECK_THROWS(d.parse_agent_action("UAV:remove_obstacle"));
    CHECK_THROWS(d.parse_agent_action("UAV"));
    CHECK_THROWS(d.parse_agent_action("Robot:move"));
}

TEST_CASE("goal modes") {
    const auto sr = sr_domain(3);
    const std::uint32_t vc = 1u << 1, fc = 1u << 3, oc = 1u << 5;
    CHECK(sr.is_goal({{vc | fc, oc, 0}}));
    CHECK_FALSE(sr.is_goal({{vc | fc, 0, 0}}));
    const auto lbf = lbf_domain(2);
    const std::uint32_t collected = 1u << 2;
    CHECK(lbf.is_goal({{collected, collected}}));
    CHECK_FALSE(lbf.is_goal({{collected, 0}}));
}

TEST_CASE("domain files round-trip") {
    for (const auto& id : builtin_domain_ids()) {
        const auto d = builtin_domain(id);
        const auto text = domain_to_json(d);
        const auto back = parse_domain_json(text);
        CHECK(domain_to_json(back) == text);
        CHECK(back.schema().hash() == d.schema().hash());
        CHECK(back.knowledge().entries().size() == d.knowledge().entries().size());
    }
}

TEST_CASE("shipped domain files match the built-in domains") {
    for (const auto& id : builtin_domain_ids()) {
        const std::string path = std::string(XMARL_SOURCE_DIR) + "/domains/" + id + ".json";
        INFO(path);
        CHECK(testing::read_file(path) == domain_to_json(builtin_domain(id)));
        CHECK(load_domain_file(path).id() == id);
    }
}

TEST_CASE("domain parsing is strict") {
    const auto text = domain_to_json(sr_domain(3));
    auto with_extra = text;
    with_extra.insert(with_extra.find('{') + 1, "\"colour\": \"red\",");
    CHECK_THROWS_AS(parse_domain_json(with_extra), SchemaError);
    CHECK_THROWS(parse_domain_json("{"));
    CHECK_THROWS(parse_domain_json("{\"format\": \"something-else\"}"));
}
