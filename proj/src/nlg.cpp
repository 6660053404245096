#include "xmarl/nlg.hpp"

#include <algorithm>

namespace xmarl {

namespace {

std::string join_and(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += i + 1 == items.size() ? " and " : ", ";
        out += items[i];
    }
    return out;
}

// "a", "a or b", "a, b, or c"
std::string join_or_list(const std::vector<std::string>& items) {
    if (items.size() == 2) return items[0] + " or " + items[1];
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += i + 1 == items.size() ? ", or " : ", ";
        out += items[i];
    }
    return out;
}

const std::string& agent_name(const Domain& d, std::size_t i) {
    const auto& name = d.agent(i).name;
    if (name.empty()) throw PhraseMapError("agent " + std::to_string(i) + " has no display name");
    return name;
}

const ActionInfo& action_phrases(const Domain& d, std::size_t a) {
    const auto& info = d.action(a);
    if (info.base.empty() || info.third_person.empty())
        throw PhraseMapError("action '" + info.id + "' has no verb phrase");
    return info;
}

const std::string& predicate_phrase(const Domain& d, std::size_t f, bool positive) {
    const auto& p = d.schema().predicate(f);
    const auto& phrase = positive ? p.positive : p.negative;
    if (phrase.empty()) throw PhraseMapError("predicate '" + p.id + "' has no " + (positive ? "positive" : "negative") + " phrase");
    return phrase;
}

// Agents of the query actions, first-mention order.
std::vector<std::size_t> subject_agents(const Query& q) {
    std::vector<std::size_t> out;
    for (const auto& a : q.actions)
        if (std::find(out.begin(), out.end(), a.agent) == out.end()) out.push_back(a.agent);
    return out;
}

bool same_action(const Query& q) {
    return std::all_of(q.actions.begin(), q.actions.end(), [&](const AgentAction& a) { return a.action == q.actions[0].action; });
}

std::string subject(const Domain& d, const Query& q) {
    std::vector<std::string> names;
    for (auto i : subject_agents(q)) names.push_back(agent_name(d, i));
    return join_and(names);
}

// "UAV rescues the victim", "UGV_1 and UGV_2 remove the obstacle",
// optionally with an adverb before the verb.
std::string affirmative(const Domain& d, const Query& q, const std::string& adverb = "") {
    const std::string pre = adverb.empty() ? " " : " " + adverb + " ";
    if (same_action(q)) {
        const auto& verb = action_phrases(d, q.actions[0].action);
        const bool singular = subject_agents(q).size() == 1;
        return subject(d, q) + pre + (singular ? verb.third_person : verb.base);
    }
    std::vector<std::string> parts;
    for (const auto& a : q.actions) parts.push_back(agent_name(d, a.agent) + pre + action_phrases(d, a.action).third_person);
    return join_and(parts);
}

std::string negative(const Domain& d, const Query& q) {
    if (same_action(q)) {
        const bool singular = subject_agents(q).size() == 1;
        return subject(d, q) + (singular ? " doesn't " : " don't ") + action_phrases(d, q.actions[0].action).base;
    }
    std::vector<std::string> parts;
    for (const auto& a : q.actions)
        parts.push_back(agent_name(d, a.agent) + " doesn't " + action_phrases(d, a.action).base);
    return join_and(parts);
}

std::string clause_text(const Domain& d, const std::vector<Literal>& clause) {
    std::string out;
    for (std::size_t k = 0; k < clause.size(); ++k) {
        if (k) out += " and ";
        out += agent_name(d, clause[k].agent) + " " + predicate_phrase(d, clause[k].predicate, clause[k].positive);
    }
    return out;
}

std::string dnf_text(const Domain& d, const LiteralDNF& dnf) {
    std::string out;
    for (std::size_t c = 0; c < dnf.clauses.size(); ++c) {
        if (c) out += ", or ";
        out += clause_text(d, dnf.clauses[c]);
    }
    return out;
}

// Condition of a what query; a single agent is referred to as "it".
std::string what_condition(const Domain& d, const Query& q, bool pronoun) {
    std::vector<std::string> parts;
    if (pronoun && q.agents.size() == 1) {
        std::vector<std::string> phrases;
        for (auto f : q.predicates) phrases.push_back(predicate_phrase(d, f, true));
        return phrases.empty() ? "" : "it " + join_and(phrases);
    }
    for (auto i : q.agents)
        for (auto f : q.predicates) parts.push_back(agent_name(d, i) + " " + predicate_phrase(d, f, true));
    return join_and(parts);
}

}  // namespace

void check_phrases(const Domain& domain) {
    for (std::size_t i = 0; i < domain.agent_count(); ++i) agent_name(domain, i);
    for (std::size_t a = 0; a < domain.actions().size(); ++a) action_phrases(domain, a);
    for (std::size_t f = 0; f < domain.schema().size(); ++f) {
        predicate_phrase(domain, f, true);
        predicate_phrase(domain, f, false);
    }
}

std::string render_condition(const Domain& domain, const Query& q, const ConditionAnswer& answer) {
    if (q.actions.empty()) throw PreconditionError("the query names no actions");
    if (q.kind == QueryKind::when) {
        switch (answer.outcome) {
            case Outcome::always: return affirmative(domain, q, "always") + ".";
            case Outcome::no_occurrence: {
                // "never" takes the same verb form as "always".
                return affirmative(domain, q, "never") + ".";
            }
            default: return affirmative(domain, q) + " when " + dnf_text(domain, answer.dnf) + ".";
        }
    }
    if (q.kind != QueryKind::whynot) throw PreconditionError("render_condition expects a when or why-not query");
    switch (answer.outcome) {
        case Outcome::vacuous: return affirmative(domain, q, "never") + " under the policy.";
        case Outcome::contradiction: {
            if (same_action(q)) {
                const bool singular = subject_agents(q).size() == 1;
                return subject(domain, q) + (singular ? " does " : " do ") +
                       action_phrases(domain, q.actions[0].action).base + " in this state.";
            }
            return affirmative(domain, q) + " in this state.";
        }
        case Outcome::always:
            return negative(domain, q) + " in this state, but no observed condition sets it apart.";
        default: return negative(domain, q) + " in this state because " + dnf_text(domain, answer.dnf) + ".";
    }
}

std::string render_what(const Domain& domain, const Query& q, const WhatAnswer& answer) {
    if (answer.outcome == Outcome::no_occurrence) {
        const auto condition = what_condition(domain, q, false);
        return "No observed state satisfies: " + (condition.empty() ? std::string("any condition") : condition) + ".";
    }
    const auto condition = what_condition(domain, q, true);
    const std::string when = condition.empty() ? "" : " when " + condition;
    std::vector<std::string> sentences;
    for (std::size_t k = 0; k < answer.agents.size(); ++k) {
        const auto& name = agent_name(domain, answer.agents[k]);
        const auto& actions = answer.actions.at(k);
        if (q.method == Method::norf) {
            std::vector<std::string> verbs;
            for (auto a : actions) verbs.push_back(action_phrases(domain, a).base);
            if (verbs.empty())
                sentences.push_back(name + " takes no action" + when + ".");
            else
                sentences.push_back(name + " can " + join_or_list(verbs) + when + ".");
        } else if (actions.empty()) {
            sentences.push_back(name + " takes no relevant action" + when + ".");
        } else {
            sentences.push_back(name + " is most likely to " + action_phrases(domain, actions[0]).base + when + ".");
        }
    }
    std::string out;
    for (std::size_t k = 0; k < sentences.size(); ++k) out += (k ? " " : "") + sentences[k];
    return out;
}

std::string render_dnf(const Domain& domain, const ConditionAnswer& answer) {
    if (answer.outcome == Outcome::always) return "TRUE";
    if (answer.dnf.clauses.empty()) return "FALSE";
    const bool wrap = answer.dnf.clauses.size() > 1;
    std::string out;
    for (std::size_t c = 0; c < answer.dnf.clauses.size(); ++c) {
        const auto& clause = answer.dnf.clauses[c];
        if (c) out += " | ";
        std::string term;
        for (std::size_t k = 0; k < clause.size(); ++k) {
            if (k) term += " & ";
            term += (clause[k].positive ? "" : "!") + agent_name(domain, clause[k].agent) + "." +
                    domain.schema().predicate(clause[k].predicate).id;
        }
        out += wrap && clause.size() > 1 ? "(" + term + ")" : term;
    }
    return out;
}

}  // namespace xmarl
