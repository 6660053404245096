#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"
#include "xmarl/bench.hpp"
#include "xmarl/summarize.hpp"

using namespace xmarl;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "xmarl");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> split_cells(const std::string& line, const std::regex& sep) {
    std::vector<std::string> out;
    std::sregex_token_iterator it(line.begin(), line.end(), sep, -1), end;
    for (; it != end; ++it)
        if (!it->str().empty()) out.push_back(*it);
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("simulate is reproducible") {
    const auto a = testing::temp_path("cli-sim-a.jsonl");
    const auto b = testing::temp_path("cli-sim-b.jsonl");
    CHECK(run({"simulate", "--domain", "sr3", "--episodes", "100", "--seed", "7", "--out", a}).code == 0);
    CHECK(run({"simulate", "--domain", "sr3", "--episodes", "100", "--seed", "7", "--out", b}).code == 0);
    const auto text = testing::read_file(a);
    CHECK_FALSE(text.empty());
    CHECK(text == testing::read_file(b));
    // Same bytes on stdout.
    CHECK(run({"--seed", "7", "simulate", "--domain", "sr3", "--episodes", "100"}).out == text);
}

TEST_CASE("file pipeline equals the in-process chart") {
    const auto trace = testing::temp_path("cli-pipe.jsonl");
    const auto mmdp = testing::temp_path("cli-pipe.mmdp");
    REQUIRE(run({"simulate", "--domain", "sr3", "--episodes", "100", "--out", trace}).code == 0);
    REQUIRE(run({"abstract", "--trace", trace, "--out", mmdp}).code == 0);
    const auto chart = run({"summarize", "--mmdp", mmdp});
    REQUIRE(chart.code == 0);
    const auto d = sr_domain(3);
    const auto m = build_abstraction(simulate({"sr3", {}, 200, 100, 42}), d);
    CHECK(chart.out == render_chart(summarize(m)));
    CHECK(run({"summarize", "--mmdp", mmdp, "--format", "csv"}).out == render_chart(summarize(m), ChartFormat::csv));

    std::ostringstream saved;
    save_abstraction(saved, m);
    CHECK(testing::read_file(mmdp) == saved.str());
}

TEST_CASE("an abstraction can come from stdin") {
    const auto trace = testing::temp_path("cli-stdin.jsonl");
    const auto mmdp = testing::temp_path("cli-stdin.mmdp");
    REQUIRE(run({"simulate", "--domain", "sr3", "--episodes", "20", "--out", trace}).code == 0);
    REQUIRE(run({"abstract", "--trace", trace, "--out", mmdp}).code == 0);
    std::istringstream piped(testing::read_file(mmdp));
    auto* saved = std::cin.rdbuf(piped.rdbuf());
    const auto r = run({"summarize", "--mmdp", "-"});
    std::cin.rdbuf(saved);
    CHECK(r.code == 0);
    CHECK(r.out == run({"summarize", "--mmdp", mmdp}).out);
}

TEST_CASE("explain reproduces the three SR answers") {
    const auto trace = testing::temp_path("cli-explain.jsonl");
    const auto mmdp = testing::temp_path("cli-explain.mmdp");
    REQUIRE(run({"simulate", "--domain", "sr3", "--out", trace}).code == 0);
    REQUIRE(run({"abstract", "--trace", trace, "--domain", "sr3", "--out", mmdp}).code == 0);

    auto r = run({"explain", "--mmdp", mmdp, "--type", "when", "--actions", "UAV:rescue_victim", "--emit-dnf"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "UAV rescues the victim when UAV detects the victim and UGV_1 detects the victim, or UAV detects the "
          "victim and UGV_2 detects the victim.\n"
          "dnf: (UAV.victim_detect & UGV_1.victim_detect) | (UAV.victim_detect & UGV_2.victim_detect)\n");

    r = run({"explain", "--mmdp", mmdp, "--type", "whynot", "--actions", "UGV_1:remove_obstacle,UGV_2:remove_obstacle",
             "--state", "1,0,0"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "UGV_1 and UGV_2 don't remove the obstacle in this state because UGV_1 does not detect the obstacle and "
          "UGV_2 does not detect the obstacle.\n");
    // Binary and index forms name the same state.
    CHECK(run({"explain", "--mmdp", mmdp, "--type", "whynot", "--actions",
               "UGV_1:remove_obstacle,UGV_2:remove_obstacle", "--state", "0b1,0b0,0"})
              .out == r.out);

    r = run({"explain", "--mmdp", mmdp, "--type", "what", "--agents", "UAV", "--predicates", "victim_detect"});
    CHECK(r.out == "UAV is most likely to rescue the victim when it detects the victim.\n");
    r = run({"explain", "--mmdp", mmdp, "--type", "what", "--agents", "UAV", "--predicates", "victim_detect",
             "--method", "norf"});
    CHECK(r.out == "UAV can rescue the victim, move, or wait when it detects the victim.\n");
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"simulate", "--domain", "sr3", "--colour", "red"}).code == 2);
    CHECK(run({"teleport"}).code == 2);
    CHECK(run({"simulate", "--domain", "sr9"}).code == 2);
    CHECK(run({"simulate", "--domain", "sr3", "--episodes", "0"}).code == 2);
    CHECK(run({"summarize", "--mmdp", testing::temp_path("does-not-exist.mmdp")}).code == 2);
    const auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("simulate") != std::string::npos);
    CHECK(help.out.find("boolmin-debug") == std::string::npos);
}

TEST_CASE("NoRF on a nine-agent team exits with the resource code") {
    const auto trace = testing::temp_path("cli-lbf9.jsonl");
    const auto mmdp = testing::temp_path("cli-lbf9.mmdp");
    REQUIRE(run({"simulate", "--domain", "lbf9", "--episodes", "30", "--out", trace}).code == 0);
    REQUIRE(run({"abstract", "--trace", trace, "--out", mmdp}).code == 0);
    auto r = run({"explain", "--mmdp", mmdp, "--type", "when", "--actions", "A_1:load", "--method", "norf", "--timeout",
                  "5"});
    CHECK(r.code == 3);
    CHECK(r.err.find("resource limit") != std::string::npos);
    r = run({"explain", "--mmdp", mmdp, "--type", "when", "--actions", "A_1:load", "--timeout", "5"});
    CHECK(r.code == 0);
}

TEST_CASE("an exhausted deadline reports partial progress") {
    const auto trace = testing::temp_path("cli-sr4.jsonl");
    const auto mmdp = testing::temp_path("cli-sr4.mmdp");
    REQUIRE(run({"simulate", "--domain", "sr4", "--out", trace}).code == 0);
    REQUIRE(run({"abstract", "--trace", trace, "--out", mmdp}).code == 0);
    const auto r = run({"explain", "--mmdp", mmdp, "--type", "when", "--actions", "UAV:rescue_victim", "--method",
                        "norf", "--timeout", "1e-9"});
    CHECK(r.code == 3);
    CHECK(r.err.find("partial progress: ") != std::string::npos);
    CHECK(r.err.find("target minterms expanded") != std::string::npos);
    CHECK(run({"explain", "--mmdp", mmdp, "--type", "when", "--actions", "UAV:rescue_victim", "--timeout", "0"}).code ==
          2);
}

TEST_CASE("boolmin-debug") {
    const auto table = testing::temp_path("and.tt");
    {
        std::ofstream out(table);
        out << "# x0 x1\n00 0\n10 0\n01 0\n11 1\n";
    }
    const auto r = run({"boolmin-debug", "--table", table});
    CHECK(r.code == 0);
    CHECK(r.out == "x0 & x1\n# clauses 1, primes 1, minimum cover\n");
    {
        std::ofstream out(table);
        out << "00 1\n0 1\n";
    }
    CHECK(run({"boolmin-debug", "--table", table}).code == 2);
}

TEST_CASE("environment and config file overrides") {
    const auto a = testing::temp_path("cli-env.jsonl");
    ::setenv("XMARL_EPISODES", "2", 1);
    REQUIRE(run({"simulate", "--domain", "sr3", "--out", a}).code == 0);
    ::unsetenv("XMARL_EPISODES");
    const auto direct = run({"simulate", "--domain", "sr3", "--episodes", "2"});
    CHECK(testing::read_file(a) == direct.out);

    const auto config = testing::temp_path("cli.toml");
    {
        std::ofstream out(config);
        out << "seed = 9\n[simulate]\ndomain = \"lbf2\"\nepisodes = 3\n";
    }
    const auto from_file = run({"--config", config, "simulate"});
    CHECK(from_file.code == 0);
    CHECK(from_file.out == run({"--seed", "9", "simulate", "--domain", "lbf2", "--episodes", "3"}).out);
}

TEST_CASE("export-domain writes the shipped definition") {
    for (const auto& id : builtin_domain_ids()) {
        const auto r = run({"export-domain", "--domain", id});
        CHECK(r.code == 0);
        CHECK(r.out == testing::read_file(std::string(XMARL_SOURCE_DIR) + "/domains/" + id + ".json"));
    }
}

TEST_CASE("domain definition files drive the pipeline") {
    const auto path = std::string(XMARL_SOURCE_DIR) + "/domains/sr3.json";
    const auto trace = testing::temp_path("cli-file-domain.jsonl");
    const auto mmdp = testing::temp_path("cli-file-domain.mmdp");
    REQUIRE(run({"simulate", "--domain", "sr3", "--episodes", "20", "--out", trace}).code == 0);
    REQUIRE(run({"abstract", "--trace", trace, "--domain", path, "--out", mmdp}).code == 0);
    CHECK(run({"summarize", "--mmdp", mmdp, "--domain", path}).code == 0);
}

TEST_CASE("bench CSV and table carry the same numbers") {
    BenchConfig config;
    config.episodes = 30;
    std::vector<BenchRow> rows{bench_domain("sr3", config), bench_domain("lbf9", config)};
    const auto csv = lines_of(render_bench(rows, true));
    const auto table = lines_of(render_bench(rows, false));
    REQUIRE(csv.size() == 3);
    REQUIRE(table.size() == 3);
    const std::regex comma(","), gap("  +");
    for (std::size_t i = 0; i < csv.size(); ++i) CHECK(split_cells(csv[i], comma) == split_cells(table[i], gap));
    const auto header = split_cells(csv[0], comma);
    CHECK(header.size() == 17);
    CHECK(header[1] == "|S|");
    const auto lbf = split_cells(csv[2], comma);
    // NoRF when and why-not fail on nine agents, WithRF answers.
    CHECK(lbf[5] == "-");
    CHECK(lbf[6] == "limit");
    CHECK(lbf[7] != "-");
    CHECK(lbf[9] == "-");
    CHECK(lbf[11] != "-");

    const auto r = run({"bench", "--domain", "sr3", "--episodes", "30", "--format", "csv"});
    CHECK(r.code == 0);
    const auto cli_lines = lines_of(r.out);
    REQUIRE(cli_lines.size() == 2);
    auto cells = split_cells(cli_lines[1], comma);
    auto expected = split_cells(csv[1], comma);
    // Timings differ between runs; sizes and clause counts do not.
    for (std::size_t c = 0; c < cells.size(); ++c)
        if (header[c].find("_ms") == std::string::npos) CHECK(cells[c] == expected[c]);
}
