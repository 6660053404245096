#pragma once

// Desk-scale scripted simulators standing in for trained MARL policies:
// search-and-rescue (sr3/sr4/sr5), warehouse-lite (rware2/rware4/rware19) and
// level-based-foraging-lite (lbf2/lbf4/lbf9).

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "xmarl/domain.hpp"

namespace xmarl {

struct TraceSample {
    std::uint64_t episode = 0;
    std::uint64_t step = 0;
    ConcreteJointState state;
    JointAction action;
    ConcreteJointState next;

    bool operator==(const TraceSample&) const = default;
};

// Knobs of the scripted decision rules. All randomness is drawn from the
// simulation seed, so the same (domain, policy, seed) yields the same trace.
struct ScriptedPolicy {
    double hesitation = 0.15;  // chance an agent that wants to move waits instead
    double hover = 0.3;        // chance a waiting UAV repositions around the victim
    double futile = 0.4;       // chance a waiting agent retries a cooperative action alone
};

struct SimulationConfig {
    std::string domain_id;
    ScriptedPolicy policy;
    int max_steps = 200;
    int episodes = 100;
    std::uint64_t seed = 42;
};

using SampleSink = std::function<void(const TraceSample&)>;

void simulate(const SimulationConfig& config, const SampleSink& sink);
std::vector<TraceSample> simulate(const SimulationConfig& config);

std::vector<std::string> builtin_domain_ids();
bool is_builtin_domain(std::string_view id);
Domain builtin_domain(std::string_view id);

Domain sr_domain(int n_agents);
Domain rware_domain(int n_agents);
Domain lbf_domain(int n_agents);

// Either a built-in id or a path to a domain definition file.
Domain resolve_domain(const std::string& id_or_path);

// Queries used by the bench harness and the acceptance suite.
struct BenchQueries {
    std::vector<AgentAction> when_actions;
    std::vector<AgentAction> whynot_actions;
    std::vector<std::uint32_t> whynot_state;  // empty: use the initial state
    std::vector<std::size_t> what_agents;
    std::vector<std::size_t> what_predicates;
};

BenchQueries default_bench_queries(const Domain& domain);

// ---------------------------------------------------------------------------
// Trace files: a JSON header line, then one JSON object per sample.

struct TraceHeader {
    std::string domain_id;
    std::vector<std::string> agents;
    std::vector<std::string> fields;
};

class TraceWriter {
public:
    TraceWriter(std::ostream& out, const Domain& domain);
    void write(const TraceSample& sample);

private:
    std::ostream& out_;
    const Domain& domain_;
};

TraceHeader read_trace_header(std::istream& in);

// Reads samples after the header; validates them against the domain and the
// per-episode step invariants.
void read_trace_samples(std::istream& in, const Domain& domain, const SampleSink& sink);

void write_trace_file(const std::string& path, const Domain& domain, const std::vector<TraceSample>& samples);
std::vector<TraceSample> read_trace_file(const std::string& path, const Domain& domain);

}  // namespace xmarl
