#include "xmarl/abstraction.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace xmarl {

std::string_view to_string(Normalization n) {
    return n == Normalization::state_visits ? "state" : "state-action";
}

Normalization normalization_from_string(std::string_view text) {
    if (text == "state") return Normalization::state_visits;
    if (text == "state-action") return Normalization::state_action_visits;
    throw PreconditionError("unknown normalization '" + std::string(text) + "' (expected state or state-action)");
}

std::optional<std::size_t> PolicyAbstraction::find(const AbstractJointState& s) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), s);
    if (it == states_.end() || *it != s) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
}

std::span<const Transition> PolicyAbstraction::outgoing(std::size_t s) const {
    if (s >= states_.size()) throw UnknownStateError("state index " + std::to_string(s) + " out of range");
    return std::span<const Transition>(transitions_).subspan(first_out_[s], first_out_[s + 1] - first_out_[s]);
}

std::vector<JointAction> PolicyAbstraction::enabled_actions(std::size_t s) const {
    std::vector<JointAction> out;
    for (const auto& t : outgoing(s)) {
        if (t.probability <= 0) continue;
        if (out.empty() || out.back() != t.action) out.push_back(t.action);
    }
    return out;
}

bool PolicyAbstraction::is_goal(std::size_t s) const {
    if (is_virtual(s)) return false;
    return domain_.is_goal(states_.at(s));
}

bool PolicyAbstraction::operator==(const PolicyAbstraction& other) const {
    if (domain_.id() != other.domain_.id() || schema().hash() != other.schema().hash()) return false;
    if (normalization_ != other.normalization_ || initial_ != other.initial_ ||
        virtual_source_ != other.virtual_source_)
        return false;
    if (states_ != other.states_ || visits_ != other.visits_ || transitions_.size() != other.transitions_.size())
        return false;
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
        const auto& a = transitions_[i];
        const auto& b = other.transitions_[i];
        if (a.src != b.src || a.action != b.action || a.dst != b.dst || a.count != b.count ||
            a.probability != b.probability)
            return false;
    }
    return true;
}

void PolicyAbstraction::index() {
    first_out_.assign(states_.size() + 1, 0);
    for (const auto& t : transitions_) ++first_out_[t.src + 1];
    for (std::size_t i = 0; i < states_.size(); ++i) first_out_[i + 1] += first_out_[i];
}

AbstractionBuilder::AbstractionBuilder(Domain domain, AbstractionOptions options)
    : domain_(std::move(domain)), options_(options) {}

void AbstractionBuilder::check_state(const AbstractJointState& s) const {
    if (s.agents.size() != domain_.agent_count())
        throw SchemaError("abstract state has " + std::to_string(s.agents.size()) + " agents, domain expects " +
                          std::to_string(domain_.agent_count()));
    const auto width = domain_.schema().size();
    for (auto bits : s.agents)
        if (width < 32 && (bits >> width) != 0)
            throw SchemaError("abstract agent state uses bits beyond " + std::to_string(width) + " predicates");
}

void AbstractionBuilder::check_action(const JointAction& a) const {
    if (a.actions.size() != domain_.agent_count())
        throw SchemaError("joint action has " + std::to_string(a.actions.size()) + " entries, domain expects " +
                          std::to_string(domain_.agent_count()));
    for (std::size_t i = 0; i < a.actions.size(); ++i)
        if (!domain_.in_alphabet(i, a.actions[i]))
            throw SchemaError("action index " + std::to_string(a.actions[i]) + " is not available to " +
                              domain_.agent(i).name);
}

void AbstractionBuilder::add(const TraceSample& sample) {
    const auto s = domain_.encode(sample.state);
    const auto next = domain_.encode(sample.next);
    add(s, sample.action, next);
    if (sample.step == 0) mark_initial(s);
}

void AbstractionBuilder::add(const AbstractJointState& s, const JointAction& a, const AbstractJointState& next,
                             std::uint64_t count) {
    check_state(s);
    check_state(next);
    check_action(a);
    if (count == 0) return;
    counts_[{s, a, next}] += count;
}

void AbstractionBuilder::mark_initial(const AbstractJointState& s, std::uint64_t episodes) {
    check_state(s);
    initials_[s] += episodes;
}

void AbstractionBuilder::merge(const AbstractionBuilder& other) {
    if (other.domain_.id() != domain_.id()) throw PreconditionError("cannot merge counts of different domains");
    for (const auto& [key, count] : other.counts_) counts_[key] += count;
    for (const auto& [s, n] : other.initials_) initials_[s] += n;
}

PolicyAbstraction AbstractionBuilder::build() const {
    if (counts_.empty()) throw PreconditionError("cannot build an abstraction from an empty sample stream");
    if (initials_.empty()) throw PreconditionError("no episode start (step 0) among the samples");
    if (initials_.size() > 1 && !options_.virtual_init)
        throw PreconditionError("episodes start in " + std::to_string(initials_.size()) +
                                " distinct abstract states; use --virtual-init to add a virtual source");

    PolicyAbstraction m;
    m.domain_ = domain_;
    m.normalization_ = options_.normalization;
    m.virtual_source_ = initials_.size() > 1;

    std::vector<AbstractJointState> states;
    if (m.virtual_source_) states.push_back(AbstractJointState{});
    for (const auto& [key, count] : counts_) {
        states.push_back(std::get<0>(key));
        states.push_back(std::get<2>(key));
    }
    for (const auto& [s, n] : initials_) states.push_back(s);
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    m.states_ = std::move(states);

    const double bound_log2 = static_cast<double>(domain_.schema().size()) * static_cast<double>(domain_.agent_count());
    assert(bound_log2 >= 63 || m.states_.size() <= (std::uint64_t{1} << static_cast<int>(bound_log2)) + 1);
    (void)bound_log2;

    auto index_of = [&](const AbstractJointState& s) { return *m.find(s); };
    m.visits_.assign(m.states_.size(), 0);

    // counts_ is ordered by (src state, action, dst state); canonical state
    // order makes that the same as (src index, action, dst index).
    if (m.virtual_source_) {
        for (const auto& [s, n] : initials_) {
            m.transitions_.push_back({0, JointAction{}, index_of(s), n, 0.0});
            m.visits_[0] += n;
        }
    }
    for (const auto& [key, count] : counts_) {
        const auto src = index_of(std::get<0>(key));
        m.transitions_.push_back({src, std::get<1>(key), index_of(std::get<2>(key)), count, 0.0});
        m.visits_[src] += count;
    }
    std::stable_sort(m.transitions_.begin(), m.transitions_.end(), [](const Transition& a, const Transition& b) {
        return std::tie(a.src, a.action, a.dst) < std::tie(b.src, b.action, b.dst);
    });

    std::map<std::pair<std::size_t, JointAction>, std::uint64_t> per_action;
    if (options_.normalization == Normalization::state_action_visits)
        for (const auto& t : m.transitions_) per_action[{t.src, t.action}] += t.count;
    for (auto& t : m.transitions_) {
        const auto denominator = options_.normalization == Normalization::state_visits
                                     ? m.visits_[t.src]
                                     : per_action[{t.src, t.action}];
        t.probability = static_cast<double>(t.count) / static_cast<double>(denominator);
    }

    m.initial_ = m.virtual_source_ ? 0 : index_of(initials_.begin()->first);
    m.index();
    return m;
}

PolicyAbstraction build_abstraction(const std::vector<TraceSample>& samples, const Domain& domain,
                                    AbstractionOptions options) {
    AbstractionBuilder builder(domain, options);
    for (const auto& s : samples) builder.add(s);
    return builder.build();
}

}  // namespace xmarl
