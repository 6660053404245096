#pragma once

// Exact two-level minimization with don't-cares. Minterm bit j is variable
// x_j; every assignment in neither `ones` nor `zeros` is a don't-care.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xmarl/error.hpp"

namespace xmarl {

using Minterm = std::uint32_t;

struct Implicant {
    std::uint32_t care = 0;    // variables that appear as literals
    std::uint32_t values = 0;  // polarity of each cared variable; zero outside care

    bool covers(Minterm m) const { return (m & care) == values; }
    int literal_count() const;
    bool operator==(const Implicant&) const = default;
};

// Literal order is (variable ascending, positive before negative); implicants
// compare by their literal sequences.
bool canonical_less(const Implicant& a, const Implicant& b);

struct MinimizeOptions {
    std::size_t max_variables = 24;
    std::size_t exact_prime_limit = 64;
    std::size_t petrick_term_limit = 200000;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct MinimizeResult {
    std::vector<Implicant> implicants;  // canonical order; empty = constant false
    bool exact = true;                  // false when the greedy cover was used
    std::size_t prime_count = 0;
    MinimizeProgress progress;
};

MinimizeResult minimize(std::vector<Minterm> ones, std::vector<Minterm> zeros, std::size_t variables,
                        const MinimizeOptions& options = {});

bool evaluate(const std::vector<Implicant>& dnf, Minterm m);

// "x0 & !x2 | x1", TRUE and FALSE for the constants.
std::string format_dnf(const std::vector<Implicant>& dnf, std::size_t variables);

}  // namespace xmarl
