#include "support.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"

namespace xmarl::testing {

Domain toy_domain(std::size_t agents, std::size_t features, std::size_t actions) {
    std::vector<ActionInfo> catalog;
    for (std::size_t a = 0; a < actions; ++a) {
        const auto id = "a" + std::to_string(a);
        catalog.push_back({id, "do " + id, "does " + id});
    }
    std::vector<std::size_t> alphabet;
    for (std::size_t a = 0; a < actions; ++a) alphabet.push_back(a);
    std::vector<AgentInfo> roster;
    for (std::size_t i = 0; i < agents; ++i) roster.push_back({"G" + std::to_string(i), alphabet});
    std::vector<std::string> fields;
    std::vector<Predicate> predicates;
    std::vector<std::size_t> all;
    for (std::size_t f = 0; f < features; ++f) {
        const auto id = "p" + std::to_string(f);
        fields.push_back("x" + std::to_string(f));
        predicates.push_back({id, fields.back(), 1, "has " + id, "lacks " + id, ""});
        all.push_back(f);
    }
    FeatureSchema schema(fields, predicates, {predicates.back().id});
    RelevanceKnowledge knowledge;
    for (std::size_t i = 0; i < agents; ++i)
        for (std::size_t a = 0; a < actions; ++a) knowledge.add({i, a}, all, {{{i, a}}});
    return Domain("toy", roster, catalog, schema, knowledge);
}

AbstractJointState joint(std::vector<std::uint32_t> bits) { return AbstractJointState{std::move(bits)}; }

JointAction acts(std::vector<std::uint16_t> ids) { return JointAction{std::move(ids)}; }

PolicyAbstraction random_mmdp(std::uint64_t seed, std::size_t max_states, std::size_t max_depth, std::size_t actions) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
    };
    const std::size_t depth = uniform(2, max_depth);
    // Layer sizes, at most max_states in total.
    std::vector<std::vector<std::uint32_t>> layers(depth + 1);
    std::uint32_t next_id = 0;
    layers[0].push_back(next_id++);
    const std::size_t budget = max_states - 1;
    for (std::size_t l = 1; l <= depth; ++l) {
        const std::size_t left_layers = depth - l + 1;
        const std::size_t room = budget - (next_id - 1) - (left_layers - 1);
        const std::size_t width = uniform(1, std::max<std::size_t>(1, std::min<std::size_t>(4, room)));
        for (std::size_t k = 0; k < width; ++k) layers[l].push_back(next_id++);
    }
    std::vector<bool> goal(next_id, false);
    for (auto id : layers[depth]) goal[id] = true;
    for (std::size_t l = 1; l < depth; ++l)
        for (auto id : layers[l])
            if (rng() % 8 == 0) goal[id] = true;

    const auto d = toy_domain(1, 7, actions);
    AbstractionBuilder builder(d);
    auto state = [&](std::uint32_t id) { return joint({id | (goal[id] ? 64u : 0u)}); };
    for (std::size_t l = 0; l < depth; ++l) {
        for (auto id : layers[l]) {
            if (goal[id]) continue;
            const std::size_t edges = uniform(1, 3);
            for (std::size_t e = 0; e < edges; ++e) {
                const std::size_t hop = (l + 2 <= depth && rng() % 3 == 0) ? 2 : 1;
                const auto& target_layer = layers[l + hop];
                const auto dst = target_layer[uniform(0, target_layer.size() - 1)];
                const auto a = static_cast<std::uint16_t>(uniform(0, actions - 1));
                builder.add(state(id), acts({a}), state(dst), uniform(1, 9));
            }
            if (rng() % 4 == 0)
                builder.add(state(id), acts({static_cast<std::uint16_t>(uniform(0, actions - 1))}), state(id),
                            uniform(1, 5));
        }
    }
    builder.mark_initial(state(layers[0][0]));
    return builder.build();
}

namespace {

void best_from(const PolicyAbstraction& m, std::size_t s, double product, std::size_t edges_left,
               std::vector<bool>& on_path, double& best) {
    if (m.is_goal(s)) {
        best = std::max(best, product);
        return;
    }
    if (edges_left == 0) return;
    for (const auto& t : m.outgoing(s)) {
        if (on_path[t.dst] || t.probability <= 0) continue;
        on_path[t.dst] = true;
        best_from(m, t.dst, product * t.probability, edges_left - 1, on_path, best);
        on_path[t.dst] = false;
    }
}

}  // namespace

double brute_force_best_path(const PolicyAbstraction& m, std::size_t max_edges) {
    std::vector<bool> on_path(m.state_count(), false);
    on_path[m.initial()] = true;
    double best = 0;
    best_from(m, m.initial(), 1.0, max_edges, on_path, best);
    return best;
}

std::size_t exhaustive_min_cover(const std::vector<Minterm>& ones, const std::vector<Minterm>& zeros,
                                 std::size_t variables) {
    if (ones.empty()) return 0;
    std::vector<std::uint32_t> cube_masks;  // which ones each admissible cube covers
    std::size_t cubes = 1;
    for (std::size_t v = 0; v < variables; ++v) cubes *= 3;
    for (std::size_t code = 0; code < cubes; ++code) {
        std::uint32_t care = 0, values = 0;
        std::size_t c = code;
        for (std::size_t v = 0; v < variables; ++v, c /= 3) {
            if (c % 3 == 0) continue;
            care |= 1u << v;
            if (c % 3 == 2) values |= 1u << v;
        }
        auto covers = [&](Minterm m) { return (m & care) == values; };
        if (std::any_of(zeros.begin(), zeros.end(), covers)) continue;
        std::uint32_t mask = 0;
        for (std::size_t k = 0; k < ones.size(); ++k)
            if (covers(ones[k])) mask |= 1u << k;
        if (mask) cube_masks.push_back(mask);
    }
    const std::uint32_t full = ones.size() >= 32 ? ~0u : (1u << ones.size()) - 1;
    std::vector<int> dist(std::size_t{full} + 1, -1);
    std::deque<std::uint32_t> queue{0};
    dist[0] = 0;
    while (!queue.empty()) {
        const auto cur = queue.front();
        queue.pop_front();
        if (cur == full) return static_cast<std::size_t>(dist[cur]);
        for (auto mask : cube_masks) {
            const auto nxt = cur | mask;
            if (dist[nxt] >= 0) continue;
            dist[nxt] = dist[cur] + 1;
            queue.push_back(nxt);
        }
    }
    return static_cast<std::size_t>(-1);
}

std::vector<std::pair<RawKey, std::uint64_t>> recount_trace(const std::string& trace_text, const Domain& domain) {
    const auto& schema = domain.schema();
    std::vector<std::size_t> field_index;
    std::vector<std::int32_t> threshold;
    for (const auto& p : schema.predicates()) {
        const auto& fields = schema.state_fields();
        field_index.push_back(static_cast<std::size_t>(std::find(fields.begin(), fields.end(), p.field) - fields.begin()));
        threshold.push_back(p.threshold);
    }
    auto bits_of = [&](const nlohmann::json& state) {
        std::vector<std::uint32_t> out;
        for (const auto& agent : state) {
            std::uint32_t b = 0;
            for (std::size_t f = 0; f < field_index.size(); ++f)
                if (agent.at(field_index[f]).get<std::int32_t>() >= threshold[f]) b |= 1u << f;
            out.push_back(b);
        }
        return out;
    };
    std::map<RawKey, std::uint64_t> counts;
    std::istringstream in(trace_text);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        RawKey key{bits_of(j.at("state")), j.at("action").get<std::vector<std::string>>(), bits_of(j.at("next"))};
        ++counts[key];
    }
    return {counts.begin(), counts.end()};
}

std::vector<std::pair<RawKey, std::uint64_t>> abstraction_counts(const PolicyAbstraction& m) {
    std::map<RawKey, std::uint64_t> counts;
    for (const auto& t : m.transitions()) {
        if (m.is_virtual(t.src)) continue;
        RawKey key{m.state(t.src).agents, {}, m.state(t.dst).agents};
        for (auto a : t.action.actions) key.action.push_back(m.domain().action(a).id);
        counts[key] += t.count;
    }
    return {counts.begin(), counts.end()};
}

std::string temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "xmarl-tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

}  // namespace xmarl::testing
