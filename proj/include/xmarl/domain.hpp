#pragma once

// Vocabulary shared by every module: agents, actions, feature predicates,
// abstract states, and the relevance knowledge used by the query filters.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xmarl/error.hpp"

namespace xmarl {

using ConcreteAgentState = std::vector<std::int32_t>;
using ConcreteJointState = std::vector<ConcreteAgentState>;

struct AgentId {
    std::size_t index = 0;
    std::string display_name;
};

// A Boolean predicate over a single agent's concrete state. The predicate
// holds iff the named state field is >= threshold.
struct Predicate {
    std::string id;
    std::string field;
    std::int32_t threshold = 1;
    std::string positive;  // "detects the victim"
    std::string negative;  // "does not detect the victim"
    std::string label;     // short task name for charts, defaults to id
};

// Bit i of an agent state is predicates()[i]; at most 32 predicates.
struct AbstractAgentState {
    std::uint32_t bits = 0;

    bool test(std::size_t predicate) const { return (bits >> predicate) & 1u; }
    auto operator<=>(const AbstractAgentState&) const = default;
};

class FeatureSchema {
public:
    FeatureSchema() = default;
    FeatureSchema(std::vector<std::string> state_fields, std::vector<Predicate> predicates,
                  std::vector<std::string> task_completion_ids);

    std::size_t size() const { return predicates_.size(); }
    const std::vector<Predicate>& predicates() const { return predicates_; }
    const Predicate& predicate(std::size_t i) const { return predicates_.at(i); }
    const std::vector<std::string>& state_fields() const { return state_fields_; }
    std::optional<std::size_t> index_of(std::string_view predicate_id) const;
    std::size_t require_index(std::string_view predicate_id) const;

    // Predicate indices of F_c in declared order.
    const std::vector<std::size_t>& task_indices() const { return task_indices_; }
    std::uint32_t task_mask() const { return task_mask_; }

    AbstractAgentState encode(std::span<const std::int32_t> concrete) const;

    // Stable 64-bit digest of predicate ids and order.
    std::uint64_t hash() const;

private:
    std::vector<std::string> state_fields_;
    std::vector<Predicate> predicates_;
    std::vector<std::size_t> field_of_;
    std::vector<std::size_t> task_indices_;
    std::uint32_t task_mask_ = 0;
};

struct AbstractJointState {
    std::vector<std::uint32_t> agents;

    auto operator<=>(const AbstractJointState&) const = default;
};

struct AbstractJointStateHash {
    std::size_t operator()(const AbstractJointState& s) const noexcept;
};

// Per-agent action indices into the domain's action catalog.
struct JointAction {
    std::vector<std::uint16_t> actions;

    auto operator<=>(const JointAction&) const = default;
};

struct JointActionHash {
    std::size_t operator()(const JointAction& a) const noexcept;
};

struct AgentAction {
    std::size_t agent = 0;
    std::size_t action = 0;

    auto operator<=>(const AgentAction&) const = default;
};

// Sorted, duplicate-free.
using ActionSet = std::vector<AgentAction>;

ActionSet make_action_set(std::vector<AgentAction> members);

struct RelevanceEntry {
    std::vector<std::size_t> agents;    // union of agents in action_sets, sorted
    std::vector<std::size_t> features;  // predicate indices, sorted
    std::vector<ActionSet> action_sets;
};

class RelevanceKnowledge {
public:
    void add(AgentAction key, std::vector<std::size_t> features, std::vector<ActionSet> action_sets);
    const RelevanceEntry* find(AgentAction key) const;
    const std::map<AgentAction, RelevanceEntry>& entries() const { return entries_; }

private:
    std::map<AgentAction, RelevanceEntry> entries_;
};

struct ActionInfo {
    std::string id;
    std::string base;          // "rescue the victim"
    std::string third_person;  // "rescues the victim"
};

struct AgentInfo {
    std::string name;
    std::vector<std::size_t> alphabet;  // action catalog indices, declared order
};

enum class GoalMode {
    each_task_by_some_agent,  // every F_c predicate holds for at least one agent
    every_agent_every_task,   // every agent satisfies every F_c predicate
};

std::string_view to_string(GoalMode mode);
GoalMode goal_mode_from_string(std::string_view text);

class Domain {
public:
    Domain() = default;
    Domain(std::string id, std::vector<AgentInfo> agents, std::vector<ActionInfo> actions,
           FeatureSchema schema, RelevanceKnowledge knowledge,
           GoalMode goal_mode = GoalMode::each_task_by_some_agent);

    const std::string& id() const { return id_; }
    std::size_t agent_count() const { return agents_.size(); }
    const std::vector<AgentInfo>& agents() const { return agents_; }
    const AgentInfo& agent(std::size_t i) const { return agents_.at(i); }
    AgentId agent_id(std::size_t i) const { return {i, agents_.at(i).name}; }
    const std::vector<ActionInfo>& actions() const { return actions_; }
    const ActionInfo& action(std::size_t i) const { return actions_.at(i); }
    const FeatureSchema& schema() const { return schema_; }
    const RelevanceKnowledge& knowledge() const { return knowledge_; }
    GoalMode goal_mode() const { return goal_mode_; }

    std::size_t agent_index(std::string_view name) const;
    std::size_t action_index(std::string_view id) const;
    bool in_alphabet(std::size_t agent, std::size_t action) const;
    // Position of action within the agent's declared alphabet.
    std::size_t alphabet_position(std::size_t agent, std::size_t action) const;

    // "UAV:rescue_victim"
    AgentAction parse_agent_action(std::string_view text) const;
    std::string format_agent_action(AgentAction a) const;

    AbstractJointState encode(const ConcreteJointState& concrete) const;
    bool is_goal(const AbstractJointState& s) const;

private:
    void validate() const;

    std::string id_;
    std::vector<AgentInfo> agents_;
    std::vector<ActionInfo> actions_;
    FeatureSchema schema_;
    RelevanceKnowledge knowledge_;
    GoalMode goal_mode_ = GoalMode::each_task_by_some_agent;
};

AbstractAgentState encode_agent_state(std::span<const std::int32_t> concrete, const FeatureSchema& schema);

// position(agent) * |feature_order| + position(predicate)
std::size_t variable_index(std::size_t agent, std::size_t predicate, std::span<const std::size_t> agent_order,
                           std::span<const std::size_t> feature_order);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

// Domain definition files (JSON, strict keys).
Domain parse_domain_json(std::string_view text);
Domain load_domain_file(const std::string& path);
std::string domain_to_json(const Domain& domain);

}  // namespace xmarl
