// Multi-robot search and rescue. UAVs and UGVs start on a shared cell; the
// victim needs one UAV and one UGV, the obstacle (a gap in a wall) needs two
// UGVs, and the fire behind the wall can be fought by any single agent.
//
// The scripted policy follows the order victim -> obstacle -> fire. Per
// episode it draws which UGV rescues, which UGV pair clears the obstacle and
// which of them pushes from the front. Agents share cells freely.

#include <algorithm>
#include <set>

#include "env_impl.hpp"

namespace xmarl {

namespace {

enum SrAction : std::size_t { kRescue = 0, kRemove = 1, kFight = 2, kMove = 3, kWait = 4 };

enum SrField : std::size_t {
    kRow,
    kCol,
    kSenseVictim,
    kSenseFire,
    kSenseObstacle,
    kVictimDone,
    kFireDone,
    kObstacleDone,
    kFieldCount
};

enum SrPredicate : std::size_t { kVictimDetect, kVictimComplete, kFireDetect, kFireComplete, kObstacleDetect, kObstacleComplete };

struct Layout {
    int rows;
    int cols;
    detail::Cell start;
    detail::Cell victim;
    detail::Cell obstacle;
    detail::Cell fire;
    std::vector<detail::Cell> walls;
    detail::Cell front;                       // the only approach to the obstacle from the start side
    std::vector<detail::Cell> support_cells;  // where the second UGV braces the first
    detail::Cell staging;                     // UAV waits here for the obstacle to clear
    detail::Cell fire_post;
};

// 3x6, the layout of the worked example.
const Layout kSmall{3, 6, {0, 0}, {2, 1}, {1, 4}, {0, 5}, {{0, 4}, {2, 4}}, {1, 3}, {{0, 3}, {2, 3}, {1, 2}}, {0, 2}, {1, 5}};

// 6x6 for the 4- and 5-agent variants.
const Layout kLarge{6,      6,      {0, 0},
                    {3, 1}, {2, 4}, {0, 5},
                    {{0, 4}, {1, 4}, {3, 4}, {4, 4}, {5, 4}},
                    {2, 3}, {{1, 3}, {3, 3}, {2, 2}},
                    {1, 2}, {1, 5}};

struct Roster {
    std::vector<std::string> names;
    std::vector<bool> is_uav;
    std::vector<double> rescuer_weights;  // over UGVs, in roster order
};

Roster roster_for(int n) {
    switch (n) {
        case 3: return {{"UAV", "UGV_1", "UGV_2"}, {true, false, false}, {0.15, 0.85}};
        case 4: return {{"UAV", "UGV_1", "UGV_2", "UGV_3"}, {true, false, false, false}, {0.2, 0.5, 0.3}};
        case 5:
            return {{"UAV_1", "UAV_2", "UGV_1", "UGV_2", "UGV_3"}, {true, true, false, false, false}, {0.3, 0.3, 0.4}};
        default: throw PreconditionError("search-and-rescue supports 3, 4 or 5 agents, got " + std::to_string(n));
    }
}

std::vector<std::size_t> indices_where(const std::vector<bool>& flags, bool value) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i] == value) out.push_back(i);
    return out;
}

bool adjacent(detail::Cell a, detail::Cell b) { return detail::manhattan(a, b) == 1; }

class SrEpisode {
public:
    SrEpisode(int n, const ScriptedPolicy& policy, detail::Rng& rng)
        : layout_(n == 3 ? kSmall : kLarge), roster_(roster_for(n)), policy_(policy), grid_(layout_.rows, layout_.cols) {
        for (auto w : layout_.walls) grid_.block(w);
        grid_.block(layout_.obstacle);
        grid_.block(layout_.victim);
        grid_.block(layout_.fire);

        const auto n_agents = roster_.names.size();
        pos_.assign(n_agents, layout_.start);
        victim_done_.assign(n_agents, false);
        fire_done_.assign(n_agents, false);
        obstacle_done_.assign(n_agents, false);
        targets_.assign(n_agents, layout_.start);

        auto uavs = indices_where(roster_.is_uav, true);
        auto ugvs = indices_where(roster_.is_uav, false);
        rescue_uav_ = uavs.size() == 1 ? uavs[0] : uavs[rng.weighted({0.6, 0.4})];
        rescue_ugv_ = ugvs[rng.weighted(roster_.rescuer_weights)];

        std::size_t partner = rescue_ugv_;
        if (ugvs.size() == 2) {
            partner = ugvs[0] == rescue_ugv_ ? ugvs[1] : ugvs[0];
        } else {
            std::vector<std::size_t> others;
            for (auto g : ugvs)
                if (g != rescue_ugv_) others.push_back(g);
            partner = others[rng.below(others.size())];
        }
        if (rng.chance(0.5)) {
            front_ugv_ = rescue_ugv_;
            support_ugv_ = partner;
        } else {
            front_ugv_ = partner;
            support_ugv_ = rescue_ugv_;
        }
        support_cell_ = layout_.support_cells[rng.below(layout_.support_cells.size())];

        auto posts = grid_.neighbors(layout_.victim);
        std::erase_if(posts, [&](detail::Cell c) { return !grid_.passable(c); });
        uav_post_ = posts[rng.below(posts.size())];
        std::erase(posts, uav_post_);
        ugv_post_ = posts[rng.below(posts.size())];

        for (auto c : grid_.neighbors(layout_.victim)) victim_zone_.insert(c);
        for (auto c : grid_.neighbors(layout_.obstacle)) task_zone_.insert(c);
        for (auto c : grid_.neighbors(layout_.fire)) task_zone_.insert(c);
        task_zone_.insert(victim_zone_.begin(), victim_zone_.end());
        task_zone_.insert(layout_.staging);
        task_zone_.insert(support_cell_);
    }

    ConcreteJointState observe() const {
        ConcreteJointState out;
        for (std::size_t i = 0; i < pos_.size(); ++i) {
            ConcreteAgentState x(kFieldCount, 0);
            x[kRow] = pos_[i].row;
            x[kCol] = pos_[i].col;
            x[kSenseVictim] = !victim_rescued_ && adjacent(pos_[i], layout_.victim);
            x[kSenseFire] = !fire_out_ && adjacent(pos_[i], layout_.fire);
            x[kSenseObstacle] = !obstacle_removed_ && adjacent(pos_[i], layout_.obstacle);
            x[kVictimDone] = victim_done_[i];
            x[kFireDone] = fire_done_[i];
            x[kObstacleDone] = obstacle_done_[i];
            out.push_back(std::move(x));
        }
        return out;
    }

    bool done() const { return victim_rescued_ && obstacle_removed_ && fire_out_; }

    JointAction decide(detail::Rng& rng) {
        JointAction joint;
        for (std::size_t i = 0; i < pos_.size(); ++i) {
            targets_[i] = pos_[i];
            joint.actions.push_back(detail::act(decide_one(i, rng)));
        }
        return joint;
    }

    void apply(const JointAction& joint) {
        const auto& a = joint.actions;
        for (std::size_t i = 0; i < pos_.size(); ++i)
            if (a[i] == kMove) pos_[i] = targets_[i];

        if (!victim_rescued_) {
            std::vector<std::size_t> team;
            bool uav = false, ugv = false;
            for (std::size_t i = 0; i < pos_.size(); ++i) {
                if (a[i] != kRescue || !adjacent(pos_[i], layout_.victim)) continue;
                team.push_back(i);
                (roster_.is_uav[i] ? uav : ugv) = true;
            }
            if (uav && ugv) {
                victim_rescued_ = true;
                for (auto i : team) victim_done_[i] = true;
            }
        }
        if (!obstacle_removed_) {
            std::vector<std::size_t> pushers;
            for (std::size_t i = 0; i < pos_.size(); ++i)
                if (a[i] == kRemove && !roster_.is_uav[i]) pushers.push_back(i);
            bool front = std::any_of(pushers.begin(), pushers.end(),
                                     [&](auto i) { return adjacent(pos_[i], layout_.obstacle); });
            bool braced = std::any_of(pushers.begin(), pushers.end(), [&](auto i) {
                return !adjacent(pos_[i], layout_.obstacle) && detail::manhattan(pos_[i], layout_.front) <= 1;
            });
            if (front && braced) {
                obstacle_removed_ = true;
                grid_.unblock(layout_.obstacle);
                for (auto i : pushers) obstacle_done_[i] = true;
            }
        }
        if (!fire_out_) {
            std::vector<std::size_t> fighters;
            for (std::size_t i = 0; i < pos_.size(); ++i)
                if (a[i] == kFight && adjacent(pos_[i], layout_.fire)) fighters.push_back(i);
            if (!fighters.empty()) {
                fire_out_ = true;
                for (auto i : fighters) fire_done_[i] = true;
            }
        }
    }

private:
    std::size_t move_toward(std::size_t i, detail::Cell target, detail::Rng& rng, const std::set<detail::Cell>& avoid = {}) {
        if (pos_[i] == target) return kWait;
        if (rng.chance(policy_.hesitation)) return kWait;
        targets_[i] = grid_.step_toward(pos_[i], target, rng, avoid);
        return targets_[i] == pos_[i] ? kWait : kMove;
    }

    std::size_t obstacle_role(std::size_t i, detail::Rng& rng) {
        const bool is_front = i == front_ugv_;
        const auto mine = is_front ? layout_.front : support_cell_;
        const auto other = is_front ? support_ugv_ : front_ugv_;
        const auto theirs = is_front ? support_cell_ : layout_.front;
        if (pos_[i] != mine) {
            std::set<detail::Cell> avoid;
            if (!victim_rescued_) avoid = victim_zone_;
            return move_toward(i, mine, rng, avoid);
        }
        if (pos_[other] == theirs) return kRemove;
        if (is_front && rng.chance(policy_.futile)) return kRemove;
        return kWait;
    }

    std::size_t decide_one(std::size_t i, detail::Rng& rng) {
        if (i == rescue_uav_) {
            if (!victim_rescued_) {
                if (pos_[i] != uav_post_) return move_toward(i, uav_post_, rng);
                if (pos_[rescue_ugv_] == ugv_post_) return kRescue;
                if (rng.chance(policy_.hover)) {
                    auto around = grid_.neighbors(pos_[i]);
                    std::erase_if(around, [&](detail::Cell c) { return !grid_.passable(c); });
                    targets_[i] = around[rng.below(around.size())];
                    return kMove;
                }
                return kWait;
            }
            if (!obstacle_removed_) return move_toward(i, layout_.staging, rng);
            if (!fire_out_) {
                if (pos_[i] == layout_.fire_post) return kFight;
                return move_toward(i, layout_.fire_post, rng);
            }
            return kWait;
        }
        const bool in_pair = i == front_ugv_ || i == support_ugv_;
        if (i == rescue_ugv_ && !victim_rescued_) {
            if (pos_[i] != ugv_post_) return move_toward(i, ugv_post_, rng);
            return pos_[rescue_uav_] == uav_post_ ? kRescue : kWait;
        }
        if (in_pair) {
            if (!obstacle_removed_) return obstacle_role(i, rng);
            return kWait;
        }
        // Spare agents wander away from the task areas.
        if (!rng.chance(0.5)) return kWait;
        auto around = grid_.neighbors(pos_[i]);
        std::erase_if(around, [&](detail::Cell c) { return !grid_.passable(c) || task_zone_.count(c); });
        if (around.empty()) return kWait;
        targets_[i] = around[rng.below(around.size())];
        return kMove;
    }

    Layout layout_;
    Roster roster_;
    ScriptedPolicy policy_;
    detail::Grid grid_;

    std::vector<detail::Cell> pos_;
    std::vector<detail::Cell> targets_;
    std::vector<bool> victim_done_, fire_done_, obstacle_done_;
    bool victim_rescued_ = false;
    bool obstacle_removed_ = false;
    bool fire_out_ = false;

    std::size_t rescue_uav_ = 0, rescue_ugv_ = 0, front_ugv_ = 0, support_ugv_ = 0;
    detail::Cell uav_post_, ugv_post_, support_cell_;
    std::set<detail::Cell> victim_zone_, task_zone_;
};

}  // namespace

Domain sr_domain(int n_agents) {
    const auto roster = roster_for(n_agents);
    std::vector<ActionInfo> actions{{"rescue_victim", "rescue the victim", "rescues the victim"},
                                    {"remove_obstacle", "remove the obstacle", "removes the obstacle"},
                                    {"fight_fire", "fight the fire", "fights the fire"},
                                    {"move", "move", "moves"},
                                    {"wait", "wait", "waits"}};
    std::vector<AgentInfo> agents;
    for (std::size_t i = 0; i < roster.names.size(); ++i) {
        if (roster.is_uav[i])
            agents.push_back({roster.names[i], {kRescue, kFight, kMove, kWait}});
        else
            agents.push_back({roster.names[i], {kRescue, kRemove, kFight, kMove, kWait}});
    }
    std::vector<std::string> fields{"row",         "col",       "sense_victim", "sense_fire", "sense_obstacle",
                                    "victim_done", "fire_done", "obstacle_done"};
    std::vector<Predicate> predicates{
        {"victim_detect", "sense_victim", 1, "detects the victim", "does not detect the victim", ""},
        {"victim_complete", "victim_done", 1, "has rescued the victim", "has not rescued the victim", "victim"},
        {"fire_detect", "sense_fire", 1, "detects the fire", "does not detect the fire", ""},
        {"fire_complete", "fire_done", 1, "has fought the fire", "has not fought the fire", "fire"},
        {"obstacle_detect", "sense_obstacle", 1, "detects the obstacle", "does not detect the obstacle", ""},
        {"obstacle_complete", "obstacle_done", 1, "has removed the obstacle", "has not removed the obstacle",
         "obstacle"}};
    FeatureSchema schema(fields, predicates, {"victim_complete", "fire_complete", "obstacle_complete"});

    auto uavs = indices_where(roster.is_uav, true);
    auto ugvs = indices_where(roster.is_uav, false);
    std::vector<std::size_t> all_features{0, 1, 2, 3, 4, 5};

    RelevanceKnowledge knowledge;
    for (std::size_t i = 0; i < roster.names.size(); ++i) {
        std::vector<ActionSet> rescue_sets;
        for (auto j : roster.is_uav[i] ? ugvs : uavs)
            rescue_sets.push_back(make_action_set({{i, kRescue}, {j, kRescue}}));
        knowledge.add({i, kRescue}, {kVictimDetect, kVictimComplete}, rescue_sets);
        if (!roster.is_uav[i]) {
            std::vector<ActionSet> remove_sets;
            for (auto j : ugvs)
                if (j != i) remove_sets.push_back(make_action_set({{i, kRemove}, {j, kRemove}}));
            knowledge.add({i, kRemove}, {kObstacleDetect, kObstacleComplete}, remove_sets);
        }
        knowledge.add({i, kFight}, {kFireDetect, kFireComplete}, {{{i, kFight}}});
        knowledge.add({i, kMove}, all_features, {{{i, kMove}}});
        knowledge.add({i, kWait}, all_features, {{{i, kWait}}});
    }
    return Domain("sr" + std::to_string(n_agents), std::move(agents), std::move(actions), std::move(schema),
                  std::move(knowledge));
}

namespace detail {

void run_sr(int n_agents, const SimulationConfig& config, const SampleSink& sink) {
    roster_for(n_agents);
    for (int e = 0; e < config.episodes; ++e) {
        Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(e)));
        SrEpisode episode(n_agents, config.policy, rng);
        drive_episode(episode, rng, config.max_steps, static_cast<std::uint64_t>(e), sink);
    }
}

}  // namespace detail

}  // namespace xmarl
