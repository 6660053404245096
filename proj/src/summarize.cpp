#include "xmarl/summarize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace xmarl {

MostProbablePath most_probable_path(const PolicyAbstraction& m) {
    const std::size_t n = m.state_count();
    if (n == 0) throw PreconditionError("abstraction has no states");
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, inf);
    std::vector<std::size_t> pred(n, n);
    std::vector<const JointAction*> via(n, nullptr);
    std::vector<bool> settled(n, false);

    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[m.initial()] = 0;
    queue.push({0.0, m.initial()});
    std::size_t reached = 0;
    std::size_t goal = n;

    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (settled[u] || d > dist[u]) continue;
        settled[u] = true;
        ++reached;
        if (m.is_goal(u)) {
            goal = u;
            break;
        }
        // Transitions are sorted by (action, dst), so for parallel edges the
        // first maximum is the smallest action.
        for (const auto& t : m.outgoing(u)) {
            if (t.probability <= 0 || settled[t.dst]) continue;
            const double nd = d - std::log(t.probability);
            const bool better = nd < dist[t.dst];
            const bool tie = nd == dist[t.dst] &&
                             (u < pred[t.dst] || (u == pred[t.dst] && t.action < *via[t.dst]));
            if (better || tie) {
                dist[t.dst] = nd;
                pred[t.dst] = u;
                via[t.dst] = &t.action;
                if (better) queue.push({nd, t.dst});
            }
        }
    }
    if (goal == n)
        throw UnreachableGoalError("no goal state is reachable from the initial state (" + std::to_string(reached) +
                                       " states explored)",
                                   reached);

    MostProbablePath path;
    for (std::size_t v = goal; v != n; v = pred[v]) {
        path.states.push_back(v);
        if (v == m.initial()) break;
        path.actions.push_back(*via[v]);
    }
    std::reverse(path.states.begin(), path.states.end());
    std::reverse(path.actions.begin(), path.actions.end());
    path.log_probability = -dist[goal];
    if (path.log_probability == 0) path.log_probability = 0;  // no -0
    return path;
}

SummaryChart summarize(const PolicyAbstraction& m, const MostProbablePath& path) {
    const auto& schema = m.schema();
    SummaryChart z;
    for (const auto& a : m.domain().agents()) z.agents.push_back(a.name);
    z.task_labels.assign(schema.size(), "");
    for (auto f : schema.task_indices()) {
        const auto& p = schema.predicate(f);
        z.task_labels[f] = p.label.empty() ? p.id : p.label;
    }
    const std::size_t agents = m.agent_count();
    const AbstractJointState* before = nullptr;
    for (std::size_t t = 0; t < path.states.size(); ++t) {
        if (m.is_virtual(path.states[t])) continue;
        const auto& s = m.state(path.states[t]);
        std::vector<std::vector<std::size_t>> y(agents);
        bool any = false;
        for (std::size_t i = 0; i < agents; ++i) {
            for (auto f : schema.task_indices()) {
                const bool now = (s.agents[i] >> f) & 1u;
                const bool was = before && ((before->agents[i] >> f) & 1u);
                if (now && !was) {
                    y[i].push_back(f);
                    any = true;
                }
            }
        }
        if (any) {
            z.columns.push_back(std::move(y));
            z.steps.push_back(t);
        }
        before = &s;
    }
    return z;
}

SummaryChart summarize(const PolicyAbstraction& m) { return summarize(m, most_probable_path(m)); }

ChartFormat chart_format_from_string(std::string_view text) {
    if (text == "chart") return ChartFormat::chart;
    if (text == "csv") return ChartFormat::csv;
    throw PreconditionError("unknown chart format '" + std::string(text) + "' (expected chart or csv)");
}

namespace {

std::string cell_text(const SummaryChart& z, const std::vector<std::size_t>& tasks) {
    std::string out;
    for (auto f : tasks) {
        if (!out.empty()) out += '+';
        out += z.task_labels.at(f);
    }
    return out;
}

}  // namespace

std::string render_chart(const SummaryChart& z, ChartFormat format) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"agent"};
    for (std::size_t c = 0; c < z.columns.size(); ++c) header.push_back("T" + std::to_string(c + 1));
    rows.push_back(header);
    if (!z.empty()) {
        for (std::size_t i = 0; i < z.agents.size(); ++i) {
            std::vector<std::string> row{z.agents[i]};
            for (const auto& column : z.columns) row.push_back(cell_text(z, column[i]));
            rows.push_back(std::move(row));
        }
    }

    std::ostringstream out;
    if (format == ChartFormat::csv) {
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
            out << '\n';
        }
        return out.str();
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            line += row[c];
            if (c + 1 < row.size()) line += std::string(width[c] - row[c].size() + 2, ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    }
    return out.str();
}

}  // namespace xmarl
