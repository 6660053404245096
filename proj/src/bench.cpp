#include "xmarl/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "xmarl/query.hpp"
#include "xmarl/summarize.hpp"

namespace xmarl {

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
BenchCell timed(F&& run) {
    BenchCell cell;
    const auto start = Clock::now();
    try {
        cell.explanations = run();
        cell.ok = true;
    } catch (const TimeoutError&) {
        cell.failure = "timeout";
    } catch (const SizeLimitError&) {
        cell.failure = "limit";
    }
    cell.millis = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return cell;
}

std::string millis_text(double ms) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", ms);
    return buf;
}

}  // namespace

BenchRow bench_abstraction(const PolicyAbstraction& m, const BenchQueries& queries, double timeout_seconds) {
    BenchRow row;
    row.domain = m.domain().id();
    row.agents = m.agent_count();
    row.states = m.state_count();
    row.transitions = m.transitions().size();
    try {
        const auto path = most_probable_path(m);
        row.path_states = path.states.size();
        row.chart_columns = summarize(m, path).columns.size();
        row.path_ok = true;
    } catch (const UnreachableGoalError&) {
    }

    const auto deadline_after = [&] {
        QueryOptions o;
        o.minimize.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                                 std::chrono::duration<double>(timeout_seconds));
        return o;
    };
    AbstractJointState whynot_state = m.state(m.initial());
    if (!queries.whynot_state.empty()) {
        AbstractJointState wanted{queries.whynot_state};
        if (m.find(wanted)) whynot_state = wanted;
    }
    for (int method = 0; method < 2; ++method) {
        const Method how = method == 0 ? Method::norf : Method::withrf;
        Query when{QueryKind::when, how, {}, queries.when_actions, std::nullopt, {}};
        row.cells[0][method] = timed([&] {
            auto a = answer_when(when, m, deadline_after());
            return a.dnf.clauses.size();
        });
        Query whynot{QueryKind::whynot, how, {}, queries.whynot_actions, whynot_state, {}};
        row.cells[1][method] = timed([&] {
            auto a = answer_whynot(whynot, m, deadline_after());
            return a.dnf.clauses.size();
        });
        Query what{QueryKind::what, how, queries.what_agents, {}, std::nullopt, queries.what_predicates};
        row.cells[2][method] = timed([&] {
            auto a = answer_what(what, m);
            std::size_t n = 0;
            for (const auto& list : a.actions) n += list.size();
            return n;
        });
    }
    return row;
}

BenchRow bench_domain(const std::string& domain_id, const BenchConfig& config) {
    const auto domain = builtin_domain(domain_id);
    SimulationConfig sim{domain_id, {}, config.max_steps, config.episodes, config.seed};
    AbstractionBuilder builder(domain, config.abstraction);
    simulate(sim, [&](const TraceSample& s) { builder.add(s); });
    return bench_abstraction(builder.build(), default_bench_queries(domain), config.timeout_seconds);
}

std::string render_bench(const std::vector<BenchRow>& rows, bool csv) {
    std::vector<std::string> header{"domain", "|S|", "|T|", "|rho|", "|Z|"};
    for (const char* kind : {"when", "whynot", "what"})
        for (const char* method : {"norf", "withrf"}) {
            header.push_back(std::string(kind) + "_" + method + "_|E|");
            header.push_back(std::string(kind) + "_" + method + "_ms");
        }
    std::vector<std::vector<std::string>> table{header};
    for (const auto& r : rows) {
        std::vector<std::string> line{r.domain, std::to_string(r.states), std::to_string(r.transitions),
                                      r.path_ok ? std::to_string(r.path_states) : "-",
                                      r.path_ok ? std::to_string(r.agents) + " x " + std::to_string(r.chart_columns)
                                                : "-"};
        for (const auto& kind : r.cells)
            for (const auto& cell : kind) {
                line.push_back(cell.ok ? std::to_string(cell.explanations) : "-");
                line.push_back(cell.ok ? millis_text(cell.millis) : cell.failure);
            }
        table.push_back(std::move(line));
    }

    std::ostringstream out;
    if (csv) {
        for (const auto& line : table) {
            for (std::size_t c = 0; c < line.size(); ++c) out << (c ? "," : "") << line[c];
            out << '\n';
        }
        return out.str();
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& line : table)
        for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
    for (const auto& line : table) {
        std::string text;
        for (std::size_t c = 0; c < line.size(); ++c) {
            const auto pad = std::string(width[c] - line[c].size(), ' ');
            // Left-align the domain, right-align numbers.
            text += c == 0 ? line[c] + pad : pad + line[c];
            if (c + 1 < line.size()) text += "  ";
        }
        out << text << '\n';
    }
    return out.str();
}

}  // namespace xmarl
