#include "grid.hpp"

#include <deque>
#include <limits>

namespace xmarl::detail {

std::size_t Rng::weighted(const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) total += w;
    double x = static_cast<double>(engine_() >> 11) * 0x1.0p-53 * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (x < weights[i]) return i;
        x -= weights[i];
    }
    return weights.size() - 1;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<Cell> Grid::neighbors(Cell c) const {
    std::vector<Cell> out;
    const Cell candidates[] = {{c.row - 1, c.col}, {c.row + 1, c.col}, {c.row, c.col - 1}, {c.row, c.col + 1}};
    for (auto n : candidates)
        if (inside(n)) out.push_back(n);
    return out;
}

std::vector<int> Grid::distances_to(Cell target, const std::set<Cell>& avoid) const {
    constexpr int inf = std::numeric_limits<int>::max();
    std::vector<int> dist(static_cast<std::size_t>(rows_ * cols_), inf);
    auto at = [&](Cell c) -> int& { return dist[static_cast<std::size_t>(c.row * cols_ + c.col)]; };
    std::deque<Cell> queue{target};
    at(target) = 0;
    while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop_front();
        for (auto n : neighbors(c)) {
            if (!passable(n) || avoid.count(n) || at(n) != inf) continue;
            at(n) = at(c) + 1;
            queue.push_back(n);
        }
    }
    return dist;
}

Cell Grid::step_toward(Cell from, Cell to, Rng& rng, const std::set<Cell>& avoid) const {
    if (from == to) return from;
    constexpr int inf = std::numeric_limits<int>::max();
    auto pick = [&](const std::set<Cell>& av) -> Cell {
        auto dist = distances_to(to, av);
        auto d = [&](Cell c) { return dist[static_cast<std::size_t>(c.row * cols_ + c.col)]; };
        int best = inf;
        std::vector<Cell> options;
        for (auto n : neighbors(from)) {
            if (!passable(n) && n != to) continue;
            if (n != to && av.count(n)) continue;
            int dn = n == to ? 0 : d(n);
            if (dn == inf) continue;
            if (dn < best) {
                best = dn;
                options.clear();
            }
            if (dn == best) options.push_back(n);
        }
        if (options.empty()) return from;
        return options[rng.below(options.size())];
    };
    Cell next = pick(avoid);
    if (next == from && !avoid.empty()) next = pick({});
    return next;
}

}  // namespace xmarl::detail
