#include "xmarl/query.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace xmarl {

std::string_view to_string(QueryKind k) {
    switch (k) {
        case QueryKind::when: return "when";
        case QueryKind::whynot: return "whynot";
        case QueryKind::what: return "what";
    }
    return "?";
}

std::string_view to_string(Method m) { return m == Method::norf ? "norf" : "withrf"; }

QueryKind query_kind_from_string(std::string_view text) {
    if (text == "when") return QueryKind::when;
    if (text == "whynot" || text == "why-not") return QueryKind::whynot;
    if (text == "what") return QueryKind::what;
    throw PreconditionError("unknown query type '" + std::string(text) + "' (expected when, whynot or what)");
}

Method method_from_string(std::string_view text) {
    if (text == "norf") return Method::norf;
    if (text == "withrf") return Method::withrf;
    throw PreconditionError("unknown method '" + std::string(text) + "' (expected norf or withrf)");
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::explained: return "explained";
        case Outcome::always: return "always";
        case Outcome::no_occurrence: return "no_occurrence";
        case Outcome::vacuous: return "vacuous";
        case Outcome::contradiction: return "contradiction";
    }
    return "?";
}

std::vector<ActionSet> RelevanceFilter::action_sets() const {
    std::vector<ActionSet> out;
    for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
    return out;
}

RelevanceFilter relevancy_filter(const std::vector<AgentAction>& actions, const RelevanceKnowledge& knowledge) {
    RelevanceFilter out;
    std::set<std::size_t> agents, features;
    for (const auto& a : actions) {
        const auto* entry = knowledge.find(a);
        if (!entry)
            throw KnowledgeGapError("no relevance entry for agent " + std::to_string(a.agent) + " action " +
                                    std::to_string(a.action));
        for (const auto& set : entry->action_sets)
            if (!std::binary_search(set.begin(), set.end(), a))
                throw KnowledgeGapError("relevant action set does not contain its own action");
        agents.insert(entry->agents.begin(), entry->agents.end());
        features.insert(entry->features.begin(), entry->features.end());
        out.groups.push_back(entry->action_sets);
    }
    out.agents.assign(agents.begin(), agents.end());
    out.features.assign(features.begin(), features.end());
    return out;
}

bool contains(const JointAction& a, const ActionSet& set) {
    return std::all_of(set.begin(), set.end(), [&](const AgentAction& x) {
        return x.agent < a.actions.size() && a.actions[x.agent] == x.action;
    });
}

bool compatible(const JointAction& a, const std::vector<AgentAction>& query_actions) {
    return contains(a, make_action_set(query_actions));
}

bool compatible(const JointAction& a, const RelevanceFilter& filter) {
    return std::all_of(filter.groups.begin(), filter.groups.end(), [&](const std::vector<ActionSet>& group) {
        return std::any_of(group.begin(), group.end(), [&](const ActionSet& set) { return contains(a, set); });
    });
}

Minterm state_minterm(const AbstractJointState& s, const std::vector<std::size_t>& var_agents,
                      const std::vector<std::size_t>& var_features) {
    Minterm m = 0;
    std::size_t j = 0;
    for (auto agent : var_agents)
        for (auto f : var_features) {
            if ((s.agents.at(agent) >> f) & 1u) m |= Minterm{1} << j;
            ++j;
        }
    return m;
}

namespace {

void check_actions(const Query& q, const Domain& d) {
    if (q.actions.empty()) throw PreconditionError("the query names no actions");
    for (const auto& a : q.actions) {
        if (a.agent >= d.agent_count()) throw PreconditionError("query agent index out of range");
        if (!d.in_alphabet(a.agent, a.action))
            throw PreconditionError("action '" + d.action(a.action).id + "' is not available to " +
                                    d.agent(a.agent).name);
    }
    for (const auto& a : q.actions)
        if (!q.agents.empty() && std::find(q.agents.begin(), q.agents.end(), a.agent) == q.agents.end())
            throw PreconditionError("query action of " + d.agent(a.agent).name + " outside the queried agents");
}

// Chooses the compatibility test and variable layout for the method.
struct Criterion {
    Method method;
    std::vector<AgentAction> actions;
    RelevanceFilter filter;

    bool operator()(const JointAction& a) const {
        return method == Method::norf ? compatible(a, actions) : compatible(a, filter);
    }
};

Criterion make_criterion(const Query& q, const PolicyAbstraction& m, ConditionAnswer& answer) {
    const Domain& d = m.domain();
    check_actions(q, d);
    Criterion c{q.method, q.actions, {}};
    if (q.method == Method::withrf) {
        c.filter = relevancy_filter(q.actions, d.knowledge());
        answer.var_agents = c.filter.agents;
        answer.var_features = c.filter.features;
    } else {
        for (std::size_t i = 0; i < d.agent_count(); ++i) answer.var_agents.push_back(i);
        for (std::size_t f = 0; f < d.schema().size(); ++f) answer.var_features.push_back(f);
    }
    return c;
}

void solve(ConditionAnswer& answer, const PolicyAbstraction& m, const QueryOptions& options) {
    std::vector<Minterm> ones, zeros;
    for (auto s : answer.targets) ones.push_back(state_minterm(m.state(s), answer.var_agents, answer.var_features));
    std::sort(ones.begin(), ones.end());
    for (auto s : answer.contrasts) {
        const auto z = state_minterm(m.state(s), answer.var_agents, answer.var_features);
        // After projection a contrast state may look like a target; targets win.
        if (!std::binary_search(ones.begin(), ones.end(), z)) zeros.push_back(z);
    }
    auto result = minimize(std::move(ones), std::move(zeros), answer.variable_count(), options.minimize);
    answer.exact = result.exact;
    answer.implicants = result.implicants;
    const std::size_t width = answer.var_features.size();
    for (const auto& p : result.implicants) {
        std::vector<Literal> clause;
        for (std::uint32_t care = p.care; care; care &= care - 1) {
            const auto j = static_cast<std::size_t>(std::countr_zero(care));
            clause.push_back({answer.var_agents[j / width], answer.var_features[j % width], ((p.values >> j) & 1u) != 0});
        }
        answer.dnf.clauses.push_back(std::move(clause));
    }
    if (answer.implicants.size() == 1 && answer.implicants[0].care == 0) answer.outcome = Outcome::always;
}

bool any_compatible(const PolicyAbstraction& m, std::size_t s, const Criterion& c) {
    for (const auto& t : m.outgoing(s))
        if (t.probability > 0 && c(t.action)) return true;
    return false;
}

}  // namespace

ConditionAnswer answer_when(const Query& q, const PolicyAbstraction& m, const QueryOptions& options) {
    ConditionAnswer answer;
    const auto criterion = make_criterion(q, m, answer);
    for (std::size_t s = 0; s < m.state_count(); ++s) {
        if (m.is_virtual(s)) continue;
        bool hit = false, miss = false;
        for (const auto& t : m.outgoing(s)) {
            if (t.probability <= 0) continue;
            (criterion(t.action) ? hit : miss) = true;
        }
        if (hit)
            answer.targets.push_back(s);
        else if (miss)
            answer.contrasts.push_back(s);
    }
    if (answer.targets.empty()) {
        answer.outcome = Outcome::no_occurrence;
        return answer;
    }
    solve(answer, m, options);
    return answer;
}

ConditionAnswer answer_whynot(const Query& q, const PolicyAbstraction& m, const QueryOptions& options) {
    if (!q.state) throw PreconditionError("a why-not query needs a state");
    const auto sq = m.find(*q.state);
    if (!sq || m.is_virtual(*sq)) throw UnknownStateError("the queried state does not occur in the abstraction");
    ConditionAnswer answer;
    const auto criterion = make_criterion(q, m, answer);
    if (any_compatible(m, *sq, criterion)) {
        answer.outcome = Outcome::contradiction;
        answer.targets = {*sq};
        return answer;
    }
    answer.targets = {*sq};
    for (std::size_t s = 0; s < m.state_count(); ++s)
        if (s != *sq && !m.is_virtual(s) && any_compatible(m, s, criterion)) answer.contrasts.push_back(s);
    if (answer.contrasts.empty()) {
        answer.outcome = Outcome::vacuous;
        return answer;
    }
    solve(answer, m, options);
    return answer;
}

WhatAnswer answer_what(const Query& q, const PolicyAbstraction& m) {
    const Domain& d = m.domain();
    if (q.agents.empty()) throw PreconditionError("a what query needs at least one agent");
    for (auto i : q.agents)
        if (i >= d.agent_count()) throw PreconditionError("query agent index out of range");
    for (auto f : q.predicates)
        if (f >= d.schema().size()) throw PreconditionError("query predicate index out of range");

    WhatAnswer answer;
    answer.agents = q.agents;
    std::uint32_t required = 0;
    for (auto f : q.predicates) required |= 1u << f;
    for (std::size_t s = 0; s < m.state_count(); ++s) {
        if (m.is_virtual(s)) continue;
        const auto& st = m.state(s);
        if (std::all_of(q.agents.begin(), q.agents.end(), [&](auto i) { return (st.agents[i] & required) == required; }))
            answer.matching_states.push_back(s);
    }
    if (answer.matching_states.empty()) {
        answer.outcome = Outcome::no_occurrence;
        answer.actions.assign(q.agents.size(), {});
        return answer;
    }

    for (auto i : q.agents) {
        auto by_alphabet = [&](std::size_t a, std::size_t b) {
            return d.alphabet_position(i, a) < d.alphabet_position(i, b);
        };
        if (q.method == Method::norf) {
            std::set<std::size_t> seen;
            for (auto s : answer.matching_states)
                for (const auto& t : m.outgoing(s))
                    if (t.probability > 0) seen.insert(t.action.actions[i]);
            std::vector<std::size_t> list(seen.begin(), seen.end());
            std::sort(list.begin(), list.end(), by_alphabet);
            answer.actions.push_back(std::move(list));
            continue;
        }
        std::set<std::size_t> relevant;
        for (auto a : d.agent(i).alphabet) {
            const auto* entry = d.knowledge().find({i, a});
            if (!entry) continue;
            for (auto f : entry->features)
                if (std::find(q.predicates.begin(), q.predicates.end(), f) != q.predicates.end()) relevant.insert(a);
        }
        std::map<std::size_t, std::uint64_t> weight;
        for (auto s : answer.matching_states)
            for (const auto& t : m.outgoing(s))
                if (t.probability > 0 && relevant.count(t.action.actions[i])) weight[t.action.actions[i]] += t.count;
        std::optional<std::size_t> best;
        for (const auto& [a, w] : weight)
            if (!best || w > weight[*best] || (w == weight[*best] && by_alphabet(a, *best))) best = a;
        answer.actions.push_back(best ? std::vector<std::size_t>{*best} : std::vector<std::size_t>{});
    }
    return answer;
}

}  // namespace xmarl
