#include "xmarl/envs.hpp"

#include <filesystem>
#include <optional>

#include "env_impl.hpp"

namespace xmarl {

namespace {

struct BuiltinId {
    std::string family;
    int agents = 0;
};

std::optional<BuiltinId> split_builtin(std::string_view id) {
    for (std::string_view family : {"sr", "rware", "lbf"}) {
        if (id.substr(0, family.size()) != family) continue;
        auto digits = id.substr(family.size());
        if (digits.empty() || digits.size() > 2) return std::nullopt;
        int n = 0;
        for (char c : digits) {
            if (c < '0' || c > '9') return std::nullopt;
            n = n * 10 + (c - '0');
        }
        return BuiltinId{std::string(family), n};
    }
    return std::nullopt;
}

}  // namespace

std::vector<std::string> builtin_domain_ids() {
    return {"sr3", "sr4", "sr5", "rware2", "rware4", "rware19", "lbf2", "lbf4", "lbf9"};
}

bool is_builtin_domain(std::string_view id) {
    for (const auto& known : builtin_domain_ids())
        if (known == id) return true;
    return false;
}

Domain builtin_domain(std::string_view id) {
    if (!is_builtin_domain(id)) throw PreconditionError("unknown domain id '" + std::string(id) + "'");
    auto parts = *split_builtin(id);
    if (parts.family == "sr") return sr_domain(parts.agents);
    if (parts.family == "rware") return rware_domain(parts.agents);
    return lbf_domain(parts.agents);
}

Domain resolve_domain(const std::string& id_or_path) {
    if (is_builtin_domain(id_or_path)) return builtin_domain(id_or_path);
    if (std::filesystem::exists(id_or_path)) return load_domain_file(id_or_path);
    throw PreconditionError("unknown domain '" + id_or_path + "' (not a built-in id or a readable file)");
}

void simulate(const SimulationConfig& config, const SampleSink& sink) {
    if (config.episodes < 1) throw PreconditionError("episodes must be >= 1");
    if (config.max_steps < 1) throw PreconditionError("max_steps must be >= 1");
    if (!is_builtin_domain(config.domain_id))
        throw PreconditionError("no simulator for domain '" + config.domain_id + "'");
    auto parts = *split_builtin(config.domain_id);
    if (parts.family == "sr")
        detail::run_sr(parts.agents, config, sink);
    else if (parts.family == "rware")
        detail::run_rware(parts.agents, config, sink);
    else
        detail::run_lbf(parts.agents, config, sink);
}

std::vector<TraceSample> simulate(const SimulationConfig& config) {
    std::vector<TraceSample> out;
    simulate(config, [&](const TraceSample& s) { out.push_back(s); });
    return out;
}

BenchQueries default_bench_queries(const Domain& domain) {
    BenchQueries q;
    const auto& schema = domain.schema();
    const auto family = split_builtin(domain.id());
    if (family && family->family == "sr") {
        const std::size_t uav = 0;
        const std::size_t ugv1 = domain.agent_index("UGV_1");
        const std::size_t ugv2 = domain.agent_index("UGV_2");
        q.when_actions = {{uav, domain.action_index("rescue_victim")}};
        q.whynot_actions = {{ugv1, domain.action_index("remove_obstacle")}, {ugv2, domain.action_index("remove_obstacle")}};
        q.whynot_state.assign(domain.agent_count(), 0);
        q.whynot_state[uav] = 1u << schema.require_index("victim_detect");
        q.what_agents = {uav};
        q.what_predicates = {schema.require_index("victim_detect")};
        return q;
    }
    if (family && family->family == "lbf") {
        q.when_actions = {{0, domain.action_index("load")}};
        q.whynot_actions = {{0, domain.action_index("load")}, {1, domain.action_index("load")}};
        q.what_agents = {0};
        q.what_predicates = {schema.require_index("food_detect")};
        return q;
    }
    if (family && family->family == "rware") {
        q.when_actions = {{0, domain.action_index("deliver")}};
        q.whynot_actions = {{0, domain.action_index("deliver")}};
        if (domain.agent_count() > 1) q.whynot_actions.push_back({1, domain.action_index("deliver")});
        q.what_agents = {0};
        q.what_predicates = {schema.require_index("carrying")};
        return q;
    }
    // External domain: first action of the first agent, first predicate.
    if (domain.agent_count() == 0 || schema.size() == 0) return q;
    const auto first = domain.agent(0).alphabet.front();
    q.when_actions = {{0, first}};
    q.whynot_actions = {{0, first}};
    q.what_agents = {0};
    q.what_predicates = {0};
    return q;
}

}  // namespace xmarl
