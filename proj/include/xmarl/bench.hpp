#pragma once

// Per-domain timing and size table: abstraction size, summary size, and the
// clause count and runtime of each query under both methods.

#include <array>
#include <string>
#include <vector>

#include "xmarl/abstraction.hpp"
#include "xmarl/envs.hpp"

namespace xmarl {

struct BenchCell {
    bool ok = false;
    std::size_t explanations = 0;  // clauses, or listed actions for what
    double millis = 0;
    std::string failure;  // "timeout" or "limit" when !ok
};

struct BenchRow {
    std::string domain;
    std::size_t agents = 0;
    std::size_t states = 0;
    std::size_t transitions = 0;
    std::size_t path_states = 0;
    std::size_t chart_columns = 0;
    bool path_ok = false;
    // [when, whynot, what][norf, withrf]
    std::array<std::array<BenchCell, 2>, 3> cells;
};

struct BenchConfig {
    int episodes = 100;
    int max_steps = 200;
    std::uint64_t seed = 42;
    double timeout_seconds = 3600;
    AbstractionOptions abstraction;
};

BenchRow bench_domain(const std::string& domain_id, const BenchConfig& config);
BenchRow bench_abstraction(const PolicyAbstraction& m, const BenchQueries& queries, double timeout_seconds);

std::string render_bench(const std::vector<BenchRow>& rows, bool csv);

}  // namespace xmarl
