#include "xmarl/domain.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace xmarl {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// ---------------------------------------------------------------------------
// FeatureSchema

FeatureSchema::FeatureSchema(std::vector<std::string> state_fields, std::vector<Predicate> predicates,
                             std::vector<std::string> task_completion_ids)
    : state_fields_(std::move(state_fields)), predicates_(std::move(predicates)) {
    if (predicates_.size() > 32)
        throw SchemaError("at most 32 feature predicates are supported, got " + std::to_string(predicates_.size()));
    std::set<std::string> seen;
    for (auto& p : predicates_) {
        if (p.id.empty()) throw SchemaError("predicate with empty id");
        if (!seen.insert(p.id).second) throw SchemaError("duplicate predicate id '" + p.id + "'");
        auto it = std::find(state_fields_.begin(), state_fields_.end(), p.field);
        if (it == state_fields_.end())
            throw SchemaError("predicate '" + p.id + "' references unknown state field '" + p.field + "'");
        field_of_.push_back(static_cast<std::size_t>(it - state_fields_.begin()));
        if (p.label.empty()) p.label = p.id;
    }
    for (const auto& id : task_completion_ids) {
        auto idx = index_of(id);
        if (!idx) throw SchemaError("task completion id '" + id + "' is not a predicate");
        if (task_mask_ & (1u << *idx)) throw SchemaError("duplicate task completion id '" + id + "'");
        task_mask_ |= 1u << *idx;
    }
    for (std::size_t i = 0; i < predicates_.size(); ++i)
        if (task_mask_ & (1u << i)) task_indices_.push_back(i);
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view predicate_id) const {
    for (std::size_t i = 0; i < predicates_.size(); ++i)
        if (predicates_[i].id == predicate_id) return i;
    return std::nullopt;
}

std::size_t FeatureSchema::require_index(std::string_view predicate_id) const {
    auto idx = index_of(predicate_id);
    if (!idx) throw SchemaError("unknown predicate id '" + std::string(predicate_id) + "'");
    return *idx;
}

AbstractAgentState FeatureSchema::encode(std::span<const std::int32_t> concrete) const {
    if (concrete.size() != state_fields_.size())
        throw SchemaError("concrete agent state has " + std::to_string(concrete.size()) + " fields, schema expects " +
                          std::to_string(state_fields_.size()));
    AbstractAgentState s;
    for (std::size_t i = 0; i < predicates_.size(); ++i)
        if (concrete[field_of_[i]] >= predicates_[i].threshold) s.bits |= 1u << i;
    return s;
}

std::uint64_t FeatureSchema::hash() const {
    std::string text;
    for (const auto& p : predicates_) text += p.id + "\x1f";
    text += "\x1e";
    for (auto i : task_indices_) text += std::to_string(i) + ",";
    return fnv1a64(text);
}

AbstractAgentState encode_agent_state(std::span<const std::int32_t> concrete, const FeatureSchema& schema) {
    return schema.encode(concrete);
}

std::size_t variable_index(std::size_t agent, std::size_t predicate, std::span<const std::size_t> agent_order,
                           std::span<const std::size_t> feature_order) {
    auto a = std::find(agent_order.begin(), agent_order.end(), agent);
    if (a == agent_order.end()) throw PreconditionError("agent " + std::to_string(agent) + " not in variable order");
    auto f = std::find(feature_order.begin(), feature_order.end(), predicate);
    if (f == feature_order.end())
        throw PreconditionError("predicate " + std::to_string(predicate) + " not in variable order");
    return static_cast<std::size_t>(a - agent_order.begin()) * feature_order.size() +
           static_cast<std::size_t>(f - feature_order.begin());
}

// ---------------------------------------------------------------------------
// hashing

namespace {
std::size_t mix(std::size_t h, std::uint64_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
}  // namespace

std::size_t AbstractJointStateHash::operator()(const AbstractJointState& s) const noexcept {
    std::size_t h = s.agents.size();
    for (auto b : s.agents) h = mix(h, b);
    return h;
}

std::size_t JointActionHash::operator()(const JointAction& a) const noexcept {
    std::size_t h = a.actions.size();
    for (auto b : a.actions) h = mix(h, b);
    return h;
}

// ---------------------------------------------------------------------------
// RelevanceKnowledge

ActionSet make_action_set(std::vector<AgentAction> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return members;
}

void RelevanceKnowledge::add(AgentAction key, std::vector<std::size_t> features, std::vector<ActionSet> action_sets) {
    RelevanceEntry entry;
    std::sort(features.begin(), features.end());
    features.erase(std::unique(features.begin(), features.end()), features.end());
    entry.features = std::move(features);
    std::set<std::size_t> agents;
    for (auto& set : action_sets) {
        set = make_action_set(std::move(set));
        if (!std::binary_search(set.begin(), set.end(), key))
            throw SchemaError("relevant action set for agent " + std::to_string(key.agent) + " action " +
                              std::to_string(key.action) + " does not contain the action itself");
        for (const auto& m : set) agents.insert(m.agent);
    }
    if (action_sets.empty())
        throw SchemaError("relevance entry for agent " + std::to_string(key.agent) + " action " +
                          std::to_string(key.action) + " has no action sets");
    entry.agents.assign(agents.begin(), agents.end());
    entry.action_sets = std::move(action_sets);
    if (!entries_.emplace(key, std::move(entry)).second)
        throw SchemaError("duplicate relevance entry for agent " + std::to_string(key.agent) + " action " +
                          std::to_string(key.action));
}

const RelevanceEntry* RelevanceKnowledge::find(AgentAction key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Domain

std::string_view to_string(GoalMode mode) {
    switch (mode) {
        case GoalMode::each_task_by_some_agent: return "each_task_by_some_agent";
        case GoalMode::every_agent_every_task: return "every_agent_every_task";
    }
    return "?";
}

GoalMode goal_mode_from_string(std::string_view text) {
    if (text == "each_task_by_some_agent") return GoalMode::each_task_by_some_agent;
    if (text == "every_agent_every_task") return GoalMode::every_agent_every_task;
    throw SchemaError("unknown goal mode '" + std::string(text) + "'");
}

Domain::Domain(std::string id, std::vector<AgentInfo> agents, std::vector<ActionInfo> actions, FeatureSchema schema,
               RelevanceKnowledge knowledge, GoalMode goal_mode)
    : id_(std::move(id)),
      agents_(std::move(agents)),
      actions_(std::move(actions)),
      schema_(std::move(schema)),
      knowledge_(std::move(knowledge)),
      goal_mode_(goal_mode) {
    validate();
}

void Domain::validate() const {
    if (agents_.empty()) throw SchemaError("domain '" + id_ + "' has no agents");
    if (actions_.size() > 0xffff) throw SchemaError("too many actions");
    std::set<std::string> names;
    for (const auto& a : agents_) {
        if (a.name.empty() || !names.insert(a.name).second)
            throw SchemaError("agent names must be non-empty and unique ('" + a.name + "')");
        if (a.alphabet.empty()) throw SchemaError("agent '" + a.name + "' has an empty action alphabet");
        for (auto act : a.alphabet)
            if (act >= actions_.size()) throw SchemaError("agent '" + a.name + "' references unknown action");
    }
    std::set<std::string> action_ids;
    for (const auto& a : actions_)
        if (a.id.empty() || !action_ids.insert(a.id).second)
            throw SchemaError("action ids must be non-empty and unique ('" + a.id + "')");
    for (const auto& [key, entry] : knowledge_.entries()) {
        if (key.agent >= agents_.size() || !in_alphabet(key.agent, key.action))
            throw SchemaError("relevance key outside the agent's action alphabet");
        for (auto f : entry.features)
            if (f >= schema_.size()) throw SchemaError("relevance entry references unknown feature");
        for (const auto& set : entry.action_sets)
            for (const auto& m : set)
                if (m.agent >= agents_.size() || !in_alphabet(m.agent, m.action))
                    throw SchemaError("relevant action set member outside the agent's action alphabet");
    }
}

std::size_t Domain::agent_index(std::string_view name) const {
    for (std::size_t i = 0; i < agents_.size(); ++i)
        if (agents_[i].name == name) return i;
    throw PreconditionError("unknown agent '" + std::string(name) + "' in domain '" + id_ + "'");
}

std::size_t Domain::action_index(std::string_view id) const {
    for (std::size_t i = 0; i < actions_.size(); ++i)
        if (actions_[i].id == id) return i;
    throw PreconditionError("unknown action '" + std::string(id) + "' in domain '" + id_ + "'");
}

bool Domain::in_alphabet(std::size_t agent, std::size_t action) const {
    const auto& alpha = agents_.at(agent).alphabet;
    return std::find(alpha.begin(), alpha.end(), action) != alpha.end();
}

std::size_t Domain::alphabet_position(std::size_t agent, std::size_t action) const {
    const auto& alpha = agents_.at(agent).alphabet;
    auto it = std::find(alpha.begin(), alpha.end(), action);
    if (it == alpha.end()) throw PreconditionError("action not in agent alphabet");
    return static_cast<std::size_t>(it - alpha.begin());
}

AgentAction Domain::parse_agent_action(std::string_view text) const {
    auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw PreconditionError("expected AGENT:ACTION, got '" + std::string(text) + "'");
    AgentAction aa{agent_index(text.substr(0, colon)), action_index(text.substr(colon + 1))};
    if (!in_alphabet(aa.agent, aa.action))
        throw PreconditionError("action '" + std::string(text.substr(colon + 1)) + "' is not available to agent '" +
                                std::string(text.substr(0, colon)) + "'");
    return aa;
}

std::string Domain::format_agent_action(AgentAction a) const {
    return agents_.at(a.agent).name + ":" + actions_.at(a.action).id;
}

AbstractJointState Domain::encode(const ConcreteJointState& concrete) const {
    if (concrete.size() != agents_.size())
        throw SchemaError("joint state has " + std::to_string(concrete.size()) + " agents, domain expects " +
                          std::to_string(agents_.size()));
    AbstractJointState s;
    s.agents.reserve(concrete.size());
    for (const auto& x : concrete) s.agents.push_back(schema_.encode(x).bits);
    return s;
}

bool Domain::is_goal(const AbstractJointState& s) const {
    const auto mask = schema_.task_mask();
    if (mask == 0) return false;
    if (goal_mode_ == GoalMode::every_agent_every_task) {
        return std::all_of(s.agents.begin(), s.agents.end(), [&](auto b) { return (b & mask) == mask; });
    }
    std::uint32_t seen = 0;
    for (auto b : s.agents) seen |= b & mask;
    return seen == mask;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

constexpr std::string_view kDomainFormat = "xmarl-domain/1";

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
    if (!obj.is_object()) throw SchemaError(std::string(where) + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw SchemaError(std::string(where) + ": unknown key '" + key + "'");
    }
}

template <typename T>
T required(const json& obj, const char* key, std::string_view where) {
    if (!obj.contains(key)) throw SchemaError(std::string(where) + ": missing key '" + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw SchemaError(std::string(where) + ": bad value for '" + key + "': " + e.what());
    }
}

}  // namespace

Domain parse_domain_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("domain file is not valid JSON: ") + e.what());
    }
    check_keys(doc,
               {"format", "id", "goal", "state_fields", "actions", "agents", "predicates", "task_completion",
                "relevance"},
               "domain");
    if (required<std::string>(doc, "format", "domain") != kDomainFormat)
        throw SchemaError("domain: unsupported format, expected " + std::string(kDomainFormat));

    auto id = required<std::string>(doc, "id", "domain");
    GoalMode goal = GoalMode::each_task_by_some_agent;
    if (doc.contains("goal")) goal = goal_mode_from_string(required<std::string>(doc, "goal", "domain"));

    std::vector<ActionInfo> actions;
    for (const auto& a : required<json>(doc, "actions", "domain")) {
        check_keys(a, {"id", "base", "third_person"}, "action");
        actions.push_back({required<std::string>(a, "id", "action"), required<std::string>(a, "base", "action"),
                           required<std::string>(a, "third_person", "action")});
    }
    auto action_idx = [&](const std::string& aid) -> std::size_t {
        for (std::size_t i = 0; i < actions.size(); ++i)
            if (actions[i].id == aid) return i;
        throw SchemaError("unknown action id '" + aid + "'");
    };

    std::vector<AgentInfo> agents;
    for (const auto& a : required<json>(doc, "agents", "domain")) {
        check_keys(a, {"name", "actions"}, "agent");
        AgentInfo info{required<std::string>(a, "name", "agent"), {}};
        for (const auto& aid : required<std::vector<std::string>>(a, "actions", "agent"))
            info.alphabet.push_back(action_idx(aid));
        agents.push_back(std::move(info));
    }
    auto agent_idx = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < agents.size(); ++i)
            if (agents[i].name == name) return i;
        throw SchemaError("unknown agent '" + name + "'");
    };

    std::vector<Predicate> predicates;
    for (const auto& p : required<json>(doc, "predicates", "domain")) {
        check_keys(p, {"id", "field", "threshold", "positive", "negative", "label"}, "predicate");
        Predicate pred;
        pred.id = required<std::string>(p, "id", "predicate");
        pred.field = required<std::string>(p, "field", "predicate");
        if (p.contains("threshold")) pred.threshold = required<std::int32_t>(p, "threshold", "predicate");
        pred.positive = required<std::string>(p, "positive", "predicate");
        pred.negative = required<std::string>(p, "negative", "predicate");
        if (p.contains("label")) pred.label = required<std::string>(p, "label", "predicate");
        predicates.push_back(std::move(pred));
    }
    FeatureSchema schema(required<std::vector<std::string>>(doc, "state_fields", "domain"), std::move(predicates),
                         required<std::vector<std::string>>(doc, "task_completion", "domain"));

    RelevanceKnowledge knowledge;
    if (doc.contains("relevance")) {
        for (const auto& r : doc.at("relevance")) {
            check_keys(r, {"agent", "action", "features", "action_sets"}, "relevance");
            AgentAction key{agent_idx(required<std::string>(r, "agent", "relevance")),
                            action_idx(required<std::string>(r, "action", "relevance"))};
            std::vector<std::size_t> features;
            for (const auto& f : required<std::vector<std::string>>(r, "features", "relevance"))
                features.push_back(schema.require_index(f));
            std::vector<ActionSet> sets;
            for (const auto& s : required<std::vector<std::vector<std::string>>>(r, "action_sets", "relevance")) {
                ActionSet set;
                for (const auto& member : s) {
                    auto colon = member.find(':');
                    if (colon == std::string::npos) throw SchemaError("action set member must be AGENT:ACTION");
                    set.push_back({agent_idx(member.substr(0, colon)), action_idx(member.substr(colon + 1))});
                }
                sets.push_back(std::move(set));
            }
            knowledge.add(key, std::move(features), std::move(sets));
        }
    }
    return Domain(std::move(id), std::move(agents), std::move(actions), std::move(schema), std::move(knowledge), goal);
}

Domain load_domain_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open domain file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_domain_json(buf.str());
}

std::string domain_to_json(const Domain& domain) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    doc["format"] = kDomainFormat;
    doc["id"] = domain.id();
    doc["goal"] = to_string(domain.goal_mode());
    doc["state_fields"] = domain.schema().state_fields();
    nlohmann::ordered_json actions = nlohmann::ordered_json::array();
    for (const auto& a : domain.actions())
        actions.push_back({{"id", a.id}, {"base", a.base}, {"third_person", a.third_person}});
    doc["actions"] = actions;
    nlohmann::ordered_json agents = nlohmann::ordered_json::array();
    for (const auto& a : domain.agents()) {
        std::vector<std::string> ids;
        for (auto act : a.alphabet) ids.push_back(domain.action(act).id);
        agents.push_back({{"name", a.name}, {"actions", ids}});
    }
    doc["agents"] = agents;
    nlohmann::ordered_json preds = nlohmann::ordered_json::array();
    for (const auto& p : domain.schema().predicates()) {
        nlohmann::ordered_json o = {{"id", p.id}, {"field", p.field}, {"positive", p.positive}, {"negative", p.negative}};
        if (p.threshold != 1) o["threshold"] = p.threshold;
        if (p.label != p.id) o["label"] = p.label;
        preds.push_back(o);
    }
    doc["predicates"] = preds;
    std::vector<std::string> tasks;
    for (auto i : domain.schema().task_indices()) tasks.push_back(domain.schema().predicate(i).id);
    doc["task_completion"] = tasks;
    nlohmann::ordered_json rel = nlohmann::ordered_json::array();
    for (const auto& [key, entry] : domain.knowledge().entries()) {
        std::vector<std::string> features;
        for (auto f : entry.features) features.push_back(domain.schema().predicate(f).id);
        std::vector<std::vector<std::string>> sets;
        for (const auto& s : entry.action_sets) {
            std::vector<std::string> members;
            for (const auto& m : s) members.push_back(domain.format_agent_action(m));
            sets.push_back(members);
        }
        rel.push_back({{"agent", domain.agent(key.agent).name},
                       {"action", domain.action(key.action).id},
                       {"features", features},
                       {"action_sets", sets}});
    }
    doc["relevance"] = rel;
    return doc.dump(2) + "\n";
}

}  // namespace xmarl
