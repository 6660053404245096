#pragma once

// The MMDP built from trace samples: abstract joint states, enabled joint
// actions and frequency-counted transition probabilities.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "xmarl/domain.hpp"
#include "xmarl/envs.hpp"

namespace xmarl {

enum class Normalization {
    state_visits,         // count(s,a,s') / visits(s)
    state_action_visits,  // count(s,a,s') / visits(s,a)
};

std::string_view to_string(Normalization n);
Normalization normalization_from_string(std::string_view text);

struct AbstractionOptions {
    Normalization normalization = Normalization::state_visits;
    // Accept differing step-0 states by adding a virtual source whose edges
    // carry the empirical initial distribution.
    bool virtual_init = false;
};

struct Transition {
    std::size_t src = 0;
    JointAction action;
    std::size_t dst = 0;
    std::uint64_t count = 0;
    double probability = 0;
};

class PolicyAbstraction {
public:
    PolicyAbstraction() = default;

    const Domain& domain() const { return domain_; }
    const FeatureSchema& schema() const { return domain_.schema(); }
    std::size_t agent_count() const { return domain_.agent_count(); }
    Normalization normalization() const { return normalization_; }

    // Canonically sorted (agent-major bit values). With a virtual source it
    // is state 0 and has an empty agent list.
    const std::vector<AbstractJointState>& states() const { return states_; }
    const AbstractJointState& state(std::size_t i) const { return states_.at(i); }
    std::size_t state_count() const { return states_.size(); }
    std::uint64_t visits(std::size_t s) const { return visits_.at(s); }
    std::optional<std::size_t> find(const AbstractJointState& s) const;

    // Sorted by (src, action, dst).
    const std::vector<Transition>& transitions() const { return transitions_; }
    std::span<const Transition> outgoing(std::size_t s) const;
    std::vector<JointAction> enabled_actions(std::size_t s) const;

    std::size_t initial() const { return initial_; }
    bool has_virtual_source() const { return virtual_source_; }
    bool is_virtual(std::size_t s) const { return virtual_source_ && s == 0; }
    bool is_goal(std::size_t s) const;

    bool operator==(const PolicyAbstraction& other) const;

private:
    friend class AbstractionBuilder;
    friend PolicyAbstraction load_abstraction(std::istream& in, const Domain& domain);

    void index();

    Domain domain_;
    Normalization normalization_ = Normalization::state_visits;
    std::vector<AbstractJointState> states_;
    std::vector<std::uint64_t> visits_;
    std::vector<Transition> transitions_;
    std::vector<std::size_t> first_out_;  // size states+1
    std::size_t initial_ = 0;
    bool virtual_source_ = false;
};

// Accumulates counts; counting is commutative so episodes may arrive in any
// order or be merged from shards.
class AbstractionBuilder {
public:
    explicit AbstractionBuilder(Domain domain, AbstractionOptions options = {});

    void add(const TraceSample& sample);
    // Direct entry point for hand-built fixtures.
    void add(const AbstractJointState& s, const JointAction& a, const AbstractJointState& next,
             std::uint64_t count = 1);
    void mark_initial(const AbstractJointState& s, std::uint64_t episodes = 1);
    void merge(const AbstractionBuilder& other);

    PolicyAbstraction build() const;

private:
    void check_state(const AbstractJointState& s) const;
    void check_action(const JointAction& a) const;

    Domain domain_;
    AbstractionOptions options_;
    std::map<std::tuple<AbstractJointState, JointAction, AbstractJointState>, std::uint64_t> counts_;
    std::map<AbstractJointState, std::uint64_t> initials_;
};

PolicyAbstraction build_abstraction(const std::vector<TraceSample>& samples, const Domain& domain,
                                    AbstractionOptions options = {});

// Line-based text file with a trailing checksum line.
void save_abstraction(std::ostream& out, const PolicyAbstraction& m);
void save_abstraction(const std::string& path, const PolicyAbstraction& m);
PolicyAbstraction load_abstraction(std::istream& in, const Domain& domain);
PolicyAbstraction load_abstraction(const std::string& path, const Domain& domain);

}  // namespace xmarl
