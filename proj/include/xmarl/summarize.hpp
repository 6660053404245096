#pragma once

// Most probable initial-to-goal path and the task-sequence chart built from
// the task-completion flags that rise along it.

#include <string>
#include <vector>

#include "xmarl/abstraction.hpp"

namespace xmarl {

struct MostProbablePath {
    std::vector<std::size_t> states;   // s_0 .. s_k, indices into the abstraction
    std::vector<JointAction> actions;  // a_0 .. a_{k-1}
    double log_probability = 0;
};

// Dijkstra on -log p from the initial state, stopping at the first goal
// settled. Among equally short routes the one whose predecessor has the
// smaller (state index, action tuple) wins.
MostProbablePath most_probable_path(const PolicyAbstraction& m);

struct SummaryChart {
    std::vector<std::string> agents;
    std::vector<std::string> task_labels;  // by predicate index; empty for non-task predicates
    // columns[c][agent] = task predicate indices that rose for that agent.
    std::vector<std::vector<std::vector<std::size_t>>> columns;
    std::vector<std::size_t> steps;  // path position of each column

    bool empty() const { return columns.empty(); }
};

SummaryChart summarize(const PolicyAbstraction& m, const MostProbablePath& path);
SummaryChart summarize(const PolicyAbstraction& m);

enum class ChartFormat { chart, csv };

ChartFormat chart_format_from_string(std::string_view text);
std::string render_chart(const SummaryChart& z, ChartFormat format = ChartFormat::chart);

}  // namespace xmarl
