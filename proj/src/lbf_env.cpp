// Level-based foraging, reduced. Agents are split into groups; each group has
// one food item whose level equals the group's combined level, so it is only
// collected when every member stands next to it and loads in the same step.
// Agents that arrive early either wait or try to load alone (which fails).

#include <algorithm>

#include "env_impl.hpp"

namespace xmarl {

namespace {

enum LbfAction : std::size_t { kLoad = 0, kMove = 1, kWait = 2 };
enum LbfField : std::size_t { kRow, kCol, kLevel, kFoodAdjacent, kFoodNear, kCollected, kFieldCount };
enum LbfPredicate : std::size_t { kFoodDetect, kNearFood, kFoodCollected };

struct Food {
    detail::Cell cell;
    int level;
};

struct Layout {
    int rows;
    int cols;
    std::vector<detail::Cell> starts;
    std::vector<int> levels;
    std::vector<std::size_t> group;  // agent -> food index
    std::vector<Food> foods;
};

Layout layout_for(int n) {
    switch (n) {
        case 2: return {5, 5, {{0, 0}, {0, 4}}, {1, 1}, {0, 0}, {{{3, 2}, 2}}};
        case 4: return {6, 6, {{0, 0}, {0, 1}, {0, 4}, {0, 5}}, {1, 1, 1, 1}, {0, 0, 1, 1}, {{{3, 1}, 2}, {{3, 4}, 2}}};
        case 9: {
            Layout l{9, 9, {}, {}, {}, {}};
            for (int g = 0; g < 3; ++g) {
                for (int k = 0; k < 3; ++k) {
                    l.starts.push_back({0, 3 * g + k});
                    l.levels.push_back(k == 2 ? 2 : 1);
                    l.group.push_back(static_cast<std::size_t>(g));
                }
                l.foods.push_back({{5, 3 * g + 1}, 4});
            }
            return l;
        }
        default: throw PreconditionError("level-based foraging supports 2, 4 or 9 agents, got " + std::to_string(n));
    }
}

class LbfEpisode {
public:
    LbfEpisode(int n, const ScriptedPolicy& policy, detail::Rng& rng)
        : layout_(layout_for(n)), policy_(policy), grid_(layout_.rows, layout_.cols) {
        for (const auto& f : layout_.foods) grid_.block(f.cell);
        pos_ = layout_.starts;
        targets_ = pos_;
        collected_.assign(pos_.size(), false);
        food_taken_.assign(layout_.foods.size(), false);
        for (std::size_t i = 0; i < pos_.size(); ++i) {
            auto around = grid_.neighbors(layout_.foods[layout_.group[i]].cell);
            std::erase_if(around, [&](detail::Cell c) { return !grid_.passable(c); });
            posts_.push_back(around[rng.below(around.size())]);
        }
    }

    ConcreteJointState observe() const {
        ConcreteJointState out;
        for (std::size_t i = 0; i < pos_.size(); ++i) {
            ConcreteAgentState x(kFieldCount, 0);
            x[kRow] = pos_[i].row;
            x[kCol] = pos_[i].col;
            x[kLevel] = layout_.levels[i];
            for (std::size_t f = 0; f < layout_.foods.size(); ++f) {
                if (food_taken_[f]) continue;
                const int d = detail::manhattan(pos_[i], layout_.foods[f].cell);
                if (d == 1) x[kFoodAdjacent] = 1;
                if (d <= 2) x[kFoodNear] = 1;
            }
            x[kCollected] = collected_[i];
            out.push_back(std::move(x));
        }
        return out;
    }

    bool done() const { return std::all_of(food_taken_.begin(), food_taken_.end(), [](bool b) { return b; }); }

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
        for (std::size_t f = 0; f < layout_.foods.size(); ++f) {
            if (food_taken_[f]) continue;
            std::vector<std::size_t> loaders;
            int level = 0;
            for (std::size_t i = 0; i < pos_.size(); ++i) {
                if (a[i] != kLoad || detail::manhattan(pos_[i], layout_.foods[f].cell) != 1) continue;
                loaders.push_back(i);
                level += layout_.levels[i];
            }
            if (!loaders.empty() && level >= layout_.foods[f].level) {
                food_taken_[f] = true;
                grid_.unblock(layout_.foods[f].cell);
                for (auto i : loaders) collected_[i] = true;
            }
        }
    }

private:
    std::size_t decide_one(std::size_t i, detail::Rng& rng) {
        const auto food = layout_.group[i];
        if (food_taken_[food]) return kWait;
        if (pos_[i] != posts_[i]) {
            if (rng.chance(policy_.hesitation)) return kWait;
            targets_[i] = grid_.step_toward(pos_[i], posts_[i], rng);
            return targets_[i] == pos_[i] ? kWait : kMove;
        }
        int ready = 0;
        for (std::size_t j = 0; j < pos_.size(); ++j)
            if (layout_.group[j] == food && pos_[j] == posts_[j]) ready += layout_.levels[j];
        if (ready >= layout_.foods[food].level) return kLoad;
        return rng.chance(policy_.futile) ? kLoad : kWait;
    }

    Layout layout_;
    ScriptedPolicy policy_;
    detail::Grid grid_;
    std::vector<detail::Cell> pos_, targets_, posts_;
    std::vector<bool> collected_, food_taken_;
};

}  // namespace

Domain lbf_domain(int n_agents) {
    const auto layout = layout_for(n_agents);
    std::vector<ActionInfo> actions{{"load", "load the food", "loads the food"},
                                    {"move", "move", "moves"},
                                    {"wait", "wait", "waits"}};
    std::vector<AgentInfo> agents;
    for (int i = 0; i < n_agents; ++i) agents.push_back({"A_" + std::to_string(i + 1), {kLoad, kMove, kWait}});
    std::vector<std::string> fields{"row", "col", "level", "food_adjacent", "food_near", "collected"};
    std::vector<Predicate> predicates{
        {"food_detect", "food_adjacent", 1, "detects the food", "does not detect the food", ""},
        {"near_food", "food_near", 1, "is near the food", "is not near the food", ""},
        {"food_collected", "collected", 1, "has collected food", "has not collected food", "food"}};
    FeatureSchema schema(fields, predicates, {"food_collected"});

    RelevanceKnowledge knowledge;
    const auto n = static_cast<std::size_t>(n_agents);
    for (std::size_t i = 0; i < n; ++i) {
        ActionSet team;
        for (std::size_t j = 0; j < n; ++j)
            if (layout.group[j] == layout.group[i]) team.push_back({j, kLoad});
        knowledge.add({i, kLoad}, {kFoodDetect, kFoodCollected}, {team});
        knowledge.add({i, kMove}, {kFoodDetect, kNearFood, kFoodCollected}, {{{i, kMove}}});
        knowledge.add({i, kWait}, {kFoodDetect, kNearFood, kFoodCollected}, {{{i, kWait}}});
    }
    return Domain("lbf" + std::to_string(n_agents), std::move(agents), std::move(actions), std::move(schema),
                  std::move(knowledge), GoalMode::every_agent_every_task);
}

namespace detail {

void run_lbf(int n_agents, const SimulationConfig& config, const SampleSink& sink) {
    layout_for(n_agents);
    for (int e = 0; e < config.episodes; ++e) {
        Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(e)));
        LbfEpisode episode(n_agents, config.policy, rng);
        drive_episode(episode, rng, config.max_steps, static_cast<std::uint64_t>(e), sink);
    }
}

}  // namespace detail

}  // namespace xmarl
