#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "xmarl/nlg.hpp"

using namespace xmarl;
using testing::joint;

namespace {

struct Sr {
    Domain d = sr_domain(3);
    std::size_t rescue = d.action_index("rescue_victim");
    std::size_t remove = d.action_index("remove_obstacle");
    std::size_t vd = d.schema().require_index("victim_detect");
    std::size_t od = d.schema().require_index("obstacle_detect");
};

std::size_t count_or(const std::string& s) {
    std::size_t n = 0;
    for (auto pos = s.find(", or "); pos != std::string::npos; pos = s.find(", or ", pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("when sentence") {
    Sr sr;
    Query q{QueryKind::when, Method::withrf, {}, {{0, sr.rescue}}, std::nullopt, {}};
    ConditionAnswer a;
    a.dnf.clauses = {{{0, sr.vd, true}, {1, sr.vd, true}}, {{0, sr.vd, true}, {2, sr.vd, true}}};
    CHECK(render_condition(sr.d, q, a) ==
          "UAV rescues the victim when UAV detects the victim and UGV_1 detects the victim, or UAV detects the "
          "victim and UGV_2 detects the victim.");
    CHECK(render_dnf(sr.d, a) == "(UAV.victim_detect & UGV_1.victim_detect) | (UAV.victim_detect & UGV_2.victim_detect)");
}

TEST_CASE("why-not sentence") {
    Sr sr;
    Query q{QueryKind::whynot, Method::withrf, {1, 2}, {{1, sr.remove}, {2, sr.remove}}, joint({1, 0, 0}), {}};
    ConditionAnswer a;
    a.dnf.clauses = {{{1, sr.od, false}, {2, sr.od, false}}};
    CHECK(render_condition(sr.d, q, a) ==
          "UGV_1 and UGV_2 don't remove the obstacle in this state because UGV_1 does not detect the obstacle and "
          "UGV_2 does not detect the obstacle.");
    CHECK(render_dnf(sr.d, a) == "!UGV_1.obstacle_detect & !UGV_2.obstacle_detect");
}

TEST_CASE("what sentences") {
    Sr sr;
    Query q{QueryKind::what, Method::withrf, {0}, {}, std::nullopt, {sr.vd}};
    WhatAnswer w;
    w.agents = {0};
    w.actions = {{sr.rescue}};
    w.matching_states = {1};
    CHECK(render_what(sr.d, q, w) == "UAV is most likely to rescue the victim when it detects the victim.");

    q.method = Method::norf;
    w.actions = {{sr.rescue, sr.d.action_index("move"), sr.d.action_index("wait")}};
    CHECK(render_what(sr.d, q, w) == "UAV can rescue the victim, move, or wait when it detects the victim.");
    w.actions = {{sr.rescue, sr.d.action_index("wait")}};
    CHECK(render_what(sr.d, q, w) == "UAV can rescue the victim or wait when it detects the victim.");

    q.method = Method::withrf;
    w.actions = {{}};
    CHECK(render_what(sr.d, q, w) == "UAV takes no relevant action when it detects the victim.");

    w.outcome = Outcome::no_occurrence;
    CHECK(render_what(sr.d, q, w) == "No observed state satisfies: UAV detects the victim.");

    // Two agents: no pronoun.
    Query two{QueryKind::what, Method::withrf, {1, 2}, {}, std::nullopt, {sr.od}};
    WhatAnswer w2;
    w2.agents = {1, 2};
    w2.actions = {{sr.remove}, {sr.remove}};
    CHECK(render_what(sr.d, two, w2) ==
          "UGV_1 is most likely to remove the obstacle when UGV_1 detects the obstacle and UGV_2 detects the "
          "obstacle. UGV_2 is most likely to remove the obstacle when UGV_1 detects the obstacle and UGV_2 detects "
          "the obstacle.");
}

TEST_CASE("always and never") {
    Sr sr;
    Query when{QueryKind::when, Method::withrf, {}, {{0, sr.rescue}}, std::nullopt, {}};
    ConditionAnswer a;
    a.outcome = Outcome::always;
    a.dnf.clauses = {{}};
    CHECK(render_condition(sr.d, when, a) == "UAV always rescues the victim.");
    CHECK(render_dnf(sr.d, a) == "TRUE");
    a = {};
    a.outcome = Outcome::no_occurrence;
    CHECK(render_condition(sr.d, when, a) == "UAV never rescues the victim.");
    CHECK(render_dnf(sr.d, a) == "FALSE");

    Query whynot{QueryKind::whynot, Method::withrf, {1, 2}, {{1, sr.remove}, {2, sr.remove}}, joint({0, 0, 0}), {}};
    a = {};
    a.outcome = Outcome::vacuous;
    CHECK(render_condition(sr.d, whynot, a) == "UGV_1 and UGV_2 never remove the obstacle under the policy.");
    a.outcome = Outcome::contradiction;
    CHECK(render_condition(sr.d, whynot, a) == "UGV_1 and UGV_2 do remove the obstacle in this state.");
    a.outcome = Outcome::always;
    CHECK(render_condition(sr.d, whynot, a) ==
          "UGV_1 and UGV_2 don't remove the obstacle in this state, but no observed condition sets it apart.");

    Query solo{QueryKind::whynot, Method::withrf, {}, {{0, sr.rescue}}, joint({0, 0, 0}), {}};
    a.outcome = Outcome::contradiction;
    CHECK(render_condition(sr.d, solo, a) == "UAV does rescue the victim in this state.");
}

TEST_CASE("mixed actions are listed per agent") {
    Sr sr;
    const auto fight = sr.d.action_index("fight_fire");
    Query q{QueryKind::when, Method::norf, {}, {{0, sr.rescue}, {1, fight}}, std::nullopt, {}};
    ConditionAnswer a;
    a.dnf.clauses = {{{0, sr.vd, true}}};
    CHECK(render_condition(sr.d, q, a) ==
          "UAV rescues the victim and UGV_1 fights the fire when UAV detects the victim.");
    CHECK(render_dnf(sr.d, a) == "UAV.victim_detect");
}

TEST_CASE("clause count matches the or-separators") {
    Sr sr;
    Query q{QueryKind::when, Method::withrf, {}, {{0, sr.rescue}}, std::nullopt, {}};
    for (std::size_t n = 1; n <= 4; ++n) {
        ConditionAnswer a;
        for (std::size_t c = 0; c < n; ++c) a.dnf.clauses.push_back({{c % 3, sr.vd, c % 2 == 0}});
        const auto text = render_condition(sr.d, q, a);
        CHECK(count_or(text) + 1 == n);
        CHECK(render_condition(sr.d, q, a) == text);
    }
}

TEST_CASE("missing phrases are reported") {
    CHECK_NOTHROW(check_phrases(sr_domain(3)));
    for (const auto& id : builtin_domain_ids()) CHECK_NOTHROW(check_phrases(builtin_domain(id)));

    std::vector<Predicate> preds{{"p", "x", 1, "has p", "", ""}};
    FeatureSchema schema({"x"}, preds, {"p"});
    RelevanceKnowledge k;
    k.add({0, 0}, {0}, {{{0, 0}}});
    const Domain no_negative("bad", {{"A", {0}}}, {{"go", "go", "goes"}}, schema, k);
    try {
        check_phrases(no_negative);
        FAIL("expected PhraseMapError");
    } catch (const PhraseMapError& e) {
        CHECK(std::string(e.what()).find("'p'") != std::string::npos);
    }

    std::vector<Predicate> ok{{"p", "x", 1, "has p", "lacks p", ""}};
    const Domain no_verb("bad", {{"A", {0}}}, {{"go", "", ""}}, FeatureSchema({"x"}, ok, {"p"}), k);
    CHECK_THROWS_AS(check_phrases(no_verb), PhraseMapError);
    Query q{QueryKind::when, Method::norf, {}, {{0, 0}}, std::nullopt, {}};
    ConditionAnswer a;
    a.dnf.clauses = {{{0, 0, true}}};
    CHECK_THROWS_AS(render_condition(no_verb, q, a), PhraseMapError);
}

TEST_CASE("end to end on the SR domain") {
    const auto d = sr_domain(3);
    const auto m = build_abstraction(simulate({"sr3", {}, 200, 100, 42}), d);
    const auto q = default_bench_queries(d);
    Query when{QueryKind::when, Method::withrf, {}, q.when_actions, std::nullopt, {}};
    CHECK(render_condition(d, when, answer_when(when, m)) ==
          "UAV rescues the victim when UAV detects the victim and UGV_1 detects the victim, or UAV detects the "
          "victim and UGV_2 detects the victim.");
    Query whynot{QueryKind::whynot, Method::withrf, {}, q.whynot_actions, AbstractJointState{q.whynot_state}, {}};
    CHECK(render_condition(d, whynot, answer_whynot(whynot, m)) ==
          "UGV_1 and UGV_2 don't remove the obstacle in this state because UGV_1 does not detect the obstacle and "
          "UGV_2 does not detect the obstacle.");
    Query what{QueryKind::what, Method::withrf, q.what_agents, {}, std::nullopt, q.what_predicates};
    CHECK(render_what(d, what, answer_what(what, m)) ==
          "UAV is most likely to rescue the victim when it detects the victim.");
    what.method = Method::norf;
    CHECK(render_what(d, what, answer_what(what, m)) ==
          "UAV can rescue the victim, move, or wait when it detects the victim.");
}
