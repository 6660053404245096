// Warehouse, reduced. Each robot fetches the item from its own shelf and
// carries it to a workstation it shares with a partner; a delivery goes
// through only when both partners stand at the station and deliver together.
// With an odd robot count the last robot has a station of its own.

#include <algorithm>

#include "env_impl.hpp"

namespace xmarl {

namespace {

enum RwareAction : std::size_t { kPickup = 0, kDeliver = 1, kMove = 2, kWait = 3 };
enum RwareField : std::size_t { kRow, kCol, kShelfAdjacent, kCarrying, kDelivered, kFieldCount };
enum RwarePredicate : std::size_t { kShelfDetect, kCarryingItem, kDeliveredItem };

constexpr int kRows = 8;

void check_agents(int n) {
    if (n < 1 || n > 24) throw PreconditionError("warehouse supports 1 to 24 robots, got " + std::to_string(n));
}

// Partner of robot i, or i itself for the unpaired last robot.
std::size_t partner_of(std::size_t i, std::size_t n) {
    const std::size_t p = i ^ 1u;
    return p < n ? p : i;
}

detail::Cell station_of(std::size_t i, std::size_t n) {
    if (partner_of(i, n) == i) return {kRows - 1, static_cast<int>(n)};
    return {kRows - 1, static_cast<int>((i & ~std::size_t{1}) + 1)};
}

class RwareEpisode {
public:
    RwareEpisode(int n, const ScriptedPolicy& policy, detail::Rng& rng)
        : n_(static_cast<std::size_t>(n)), policy_(policy), grid_(kRows, n + 2) {
        for (std::size_t i = 0; i < n_; ++i) {
            const int col = static_cast<int>(i) + 1;
            pos_.push_back({0, col});
            shelf_.push_back({4, col});
            pickup_post_.push_back({3, col});
            grid_.block(station_of(i, n_));
        }
        for (std::size_t i = 0; i < n_; ++i) {
            auto around = grid_.neighbors(station_of(i, n_));
            std::erase_if(around, [&](detail::Cell c) { return !grid_.passable(c); });
            delivery_post_.push_back(around[rng.below(around.size())]);
        }
        targets_ = pos_;
        carrying_.assign(n_, false);
        delivered_.assign(n_, false);
    }

    ConcreteJointState observe() const {
        ConcreteJointState out;
        for (std::size_t i = 0; i < n_; ++i) {
            ConcreteAgentState x(kFieldCount, 0);
            x[kRow] = pos_[i].row;
            x[kCol] = pos_[i].col;
            x[kShelfAdjacent] = !carrying_[i] && !delivered_[i] && detail::manhattan(pos_[i], shelf_[i]) == 1;
            x[kCarrying] = carrying_[i];
            x[kDelivered] = delivered_[i];
            out.push_back(std::move(x));
        }
        return out;
    }

    bool done() const { return std::all_of(delivered_.begin(), delivered_.end(), [](bool b) { return b; }); }

    JointAction decide(detail::Rng& rng) {
        JointAction joint;
        for (std::size_t i = 0; i < n_; ++i) {
            targets_[i] = pos_[i];
            joint.actions.push_back(detail::act(decide_one(i, rng)));
        }
        return joint;
    }

    void apply(const JointAction& joint) {
        const auto& a = joint.actions;
        std::vector<bool> was_carrying = carrying_;
        for (std::size_t i = 0; i < n_; ++i) {
            if (a[i] == kMove) pos_[i] = targets_[i];
            if (a[i] == kPickup && !carrying_[i] && !delivered_[i] && detail::manhattan(pos_[i], shelf_[i]) == 1)
                carrying_[i] = true;
        }
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t p = partner_of(i, n_);
            auto ready = [&](std::size_t k) {
                return a[k] == kDeliver && was_carrying[k] && detail::manhattan(pos_[k], station_of(k, n_)) == 1;
            };
            if (ready(i) && ready(p)) {
                carrying_[i] = false;
                delivered_[i] = true;
            }
        }
    }

private:
    std::size_t decide_one(std::size_t i, detail::Rng& rng) {
        if (delivered_[i]) return kWait;
        const detail::Cell goal = carrying_[i] ? delivery_post_[i] : pickup_post_[i];
        if (pos_[i] != goal) {
            if (rng.chance(policy_.hesitation)) return kWait;
            targets_[i] = grid_.step_toward(pos_[i], goal, rng);
            return targets_[i] == pos_[i] ? kWait : kMove;
        }
        if (!carrying_[i]) return kPickup;
        const std::size_t p = partner_of(i, n_);
        if (p == i || (carrying_[p] && pos_[p] == delivery_post_[p])) return kDeliver;
        return rng.chance(policy_.futile) ? kDeliver : kWait;
    }

    std::size_t n_;
    ScriptedPolicy policy_;
    detail::Grid grid_;
    std::vector<detail::Cell> pos_, targets_, shelf_, pickup_post_, delivery_post_;
    std::vector<bool> carrying_, delivered_;
};

}  // namespace

Domain rware_domain(int n_agents) {
    check_agents(n_agents);
    std::vector<ActionInfo> actions{{"pickup", "pick up the item", "picks up the item"},
                                    {"deliver", "deliver the item", "delivers the item"},
                                    {"move", "move", "moves"},
                                    {"wait", "wait", "waits"}};
    std::vector<AgentInfo> agents;
    for (int i = 0; i < n_agents; ++i)
        agents.push_back({"R_" + std::to_string(i + 1), {kPickup, kDeliver, kMove, kWait}});
    std::vector<std::string> fields{"row", "col", "shelf_adjacent", "carrying", "delivered"};
    std::vector<Predicate> predicates{
        {"shelf_detect", "shelf_adjacent", 1, "is next to its shelf", "is not next to its shelf", ""},
        {"carrying", "carrying", 1, "carries its item", "does not carry its item", ""},
        {"delivered", "delivered", 1, "has delivered its item", "has not delivered its item", "delivery"}};
    FeatureSchema schema(fields, predicates, {"delivered"});

    RelevanceKnowledge knowledge;
    const auto n = static_cast<std::size_t>(n_agents);
    const std::vector<std::size_t> all{kShelfDetect, kCarryingItem, kDeliveredItem};
    for (std::size_t i = 0; i < n; ++i) {
        knowledge.add({i, kPickup}, {kShelfDetect, kCarryingItem}, {{{i, kPickup}}});
        knowledge.add({i, kDeliver}, {kCarryingItem, kDeliveredItem},
                      {make_action_set({{i, kDeliver}, {partner_of(i, n), kDeliver}})});
        knowledge.add({i, kMove}, all, {{{i, kMove}}});
        knowledge.add({i, kWait}, all, {{{i, kWait}}});
    }
    return Domain("rware" + std::to_string(n_agents), std::move(agents), std::move(actions), std::move(schema),
                  std::move(knowledge), GoalMode::every_agent_every_task);
}

namespace detail {

void run_rware(int n_agents, const SimulationConfig& config, const SampleSink& sink) {
    check_agents(n_agents);
    for (int e = 0; e < config.episodes; ++e) {
        Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(e)));
        RwareEpisode episode(n_agents, config.policy, rng);
        drive_episode(episode, rng, config.max_steps, static_cast<std::uint64_t>(e), sink);
    }
}

}  // namespace detail

}  // namespace xmarl
