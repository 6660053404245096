#pragma once

// Fixtures and brute-force oracles shared by the unit tests and the
// acceptance runner. None of these reuse the code paths they check.

#include <cstdint>
#include <string>
#include <vector>

#include "xmarl/abstraction.hpp"
#include "xmarl/boolmin.hpp"
#include "xmarl/envs.hpp"

namespace xmarl::testing {

// `agents` agents sharing actions a0..a{actions-1}; predicates p0..p{features-1},
// the last one being the only task predicate. Every action is solo-relevant
// to every feature.
Domain toy_domain(std::size_t agents, std::size_t features, std::size_t actions);

AbstractJointState joint(std::vector<std::uint32_t> bits);
JointAction acts(std::vector<std::uint16_t> ids);

// Layered random MMDP on a one-agent toy domain: state ids are the low six
// bits, the task bit (bit 6) marks goals. Forward edges go one or two layers
// ahead; some states also loop on themselves.
PolicyAbstraction random_mmdp(std::uint64_t seed, std::size_t max_states = 40, std::size_t max_depth = 12,
                              std::size_t actions = 4);

// Exhaustive search over simple action-labeled paths from the initial state
// to any goal; returns the best probability product (0 if none).
double brute_force_best_path(const PolicyAbstraction& m, std::size_t max_edges = 12);

// Fewest cubes that cover every one and no zero (breadth-first over covered
// subsets of ones, using every cube of the 3^V space).
std::size_t exhaustive_min_cover(const std::vector<Minterm>& ones, const std::vector<Minterm>& zeros,
                                 std::size_t variables);

// Transition counts keyed by (state bits, action names, next bits), recounted
// straight from the raw trace text.
struct RawKey {
    std::vector<std::uint32_t> state;
    std::vector<std::string> action;
    std::vector<std::uint32_t> next;
    auto operator<=>(const RawKey&) const = default;
};
std::vector<std::pair<RawKey, std::uint64_t>> recount_trace(const std::string& trace_text, const Domain& domain);
std::vector<std::pair<RawKey, std::uint64_t>> abstraction_counts(const PolicyAbstraction& m);

std::string temp_path(const std::string& name);
std::string read_file(const std::string& path);

}  // namespace xmarl::testing
