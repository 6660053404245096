#pragma once

// Small grid-world helpers shared by the scripted simulators.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

namespace xmarl::detail {

struct Cell {
    int row = 0;
    int col = 0;

    auto operator<=>(const Cell&) const = default;
};

inline int manhattan(Cell a, Cell b) {
    return (a.row > b.row ? a.row - b.row : b.row - a.row) + (a.col > b.col ? a.col - b.col : b.col - a.col);
}

// mt19937_64 is fully specified by the standard, and the helpers below avoid
// the implementation-defined distributions, so traces are portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t below(std::uint64_t n) { return engine_() % n; }
    bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }
    std::size_t weighted(const std::vector<double>& weights);

private:
    std::mt19937_64 engine_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class Grid {
public:
    Grid(int rows, int cols) : rows_(rows), cols_(cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool inside(Cell c) const { return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_; }
    bool blocked(Cell c) const { return blocked_.count(c) != 0; }
    bool passable(Cell c) const { return inside(c) && !blocked(c); }
    void block(Cell c) { blocked_.insert(c); }
    void unblock(Cell c) { blocked_.erase(c); }

    std::vector<Cell> neighbors(Cell c) const;

    // Next cell on a shortest path from `from` to `to`, avoiding `avoid` cells
    // when possible. Ties among equally short moves are broken by rng.
    // Returns `from` when already there or when the target is unreachable.
    Cell step_toward(Cell from, Cell to, Rng& rng, const std::set<Cell>& avoid = {}) const;

private:
    std::vector<int> distances_to(Cell target, const std::set<Cell>& avoid) const;

    int rows_;
    int cols_;
    std::set<Cell> blocked_;
};

}  // namespace xmarl::detail
