#pragma once

// When / why-not / what queries over a policy abstraction, each either over
// all agents and features (norf) or restricted by relevance knowledge
// (withrf).

#include <optional>
#include <string>
#include <vector>

#include "xmarl/abstraction.hpp"
#include "xmarl/boolmin.hpp"

namespace xmarl {

enum class QueryKind { when, whynot, what };
enum class Method { norf, withrf };

std::string_view to_string(QueryKind k);
std::string_view to_string(Method m);
QueryKind query_kind_from_string(std::string_view text);
Method method_from_string(std::string_view text);

struct Query {
    QueryKind kind = QueryKind::when;
    Method method = Method::withrf;
    std::vector<std::size_t> agents;    // G_q
    std::vector<AgentAction> actions;   // A_q (when, whynot)
    std::optional<AbstractJointState> state;  // s_q (whynot)
    std::vector<std::size_t> predicates;      // F_q (what)
};

struct RelevanceFilter {
    std::vector<std::size_t> agents;    // sorted
    std::vector<std::size_t> features;  // schema order
    // groups[k] = the relevant action sets of the k-th query action.
    std::vector<std::vector<ActionSet>> groups;

    std::vector<ActionSet> action_sets() const;
};

RelevanceFilter relevancy_filter(const std::vector<AgentAction>& actions, const RelevanceKnowledge& knowledge);

bool contains(const JointAction& a, const ActionSet& set);
// Every query action is part of the joint action.
bool compatible(const JointAction& a, const std::vector<AgentAction>& query_actions);
// Every query action has one of its relevant sets inside the joint action.
bool compatible(const JointAction& a, const RelevanceFilter& filter);

struct Literal {
    std::size_t agent = 0;
    std::size_t predicate = 0;
    bool positive = true;

    auto operator<=>(const Literal&) const = default;
};

struct LiteralDNF {
    std::vector<std::vector<Literal>> clauses;
};

enum class Outcome {
    explained,      // a condition was found
    always,         // the condition is a tautology
    no_occurrence,  // the queried behavior never happens / no state matches
    vacuous,        // why-not: the behavior never happens anywhere
    contradiction,  // why-not: the behavior does happen in the queried state
};

std::string_view to_string(Outcome o);

struct QueryOptions {
    MinimizeOptions minimize;
};

struct ConditionAnswer {
    Outcome outcome = Outcome::explained;
    LiteralDNF dnf;
    std::vector<std::size_t> targets;     // V, state indices
    std::vector<std::size_t> contrasts;   // V-bar after conflict removal
    std::vector<std::size_t> var_agents;  // Boolean variable layout
    std::vector<std::size_t> var_features;
    std::vector<Implicant> implicants;
    bool exact = true;

    std::size_t variable_count() const { return var_agents.size() * var_features.size(); }
};

// Bit j of the result is variable j of the layout.
Minterm state_minterm(const AbstractJointState& s, const std::vector<std::size_t>& var_agents,
                      const std::vector<std::size_t>& var_features);

ConditionAnswer answer_when(const Query& q, const PolicyAbstraction& m, const QueryOptions& options = {});
ConditionAnswer answer_whynot(const Query& q, const PolicyAbstraction& m, const QueryOptions& options = {});

struct WhatAnswer {
    Outcome outcome = Outcome::explained;
    std::vector<std::size_t> agents;
    // NoRF: every observed action per agent (alphabet order).
    // WithRF: the most frequent relevant action, or nothing.
    std::vector<std::vector<std::size_t>> actions;
    std::vector<std::size_t> matching_states;
};

WhatAnswer answer_what(const Query& q, const PolicyAbstraction& m);

}  // namespace xmarl
