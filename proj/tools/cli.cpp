#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "xmarl/abstraction.hpp"
#include "xmarl/bench.hpp"
#include "xmarl/boolmin.hpp"
#include "xmarl/envs.hpp"
#include "xmarl/nlg.hpp"
#include "xmarl/query.hpp"
#include "xmarl/summarize.hpp"

namespace xmarl {

namespace {

constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

// Writes to `path`, or to the fallback stream for "" and "-".
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
            return;
        }
        file_.open(path, std::ios::binary);
        if (!file_) throw PreconditionError("cannot write " + path);
        stream_ = &file_;
    }
    std::ostream& operator*() { return *stream_; }
    void close() {
        stream_->flush();
        if (!*stream_) throw PreconditionError("write failed");
    }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, ',')) {
        const auto b = part.find_first_not_of(' ');
        const auto e = part.find_last_not_of(' ');
        if (b != std::string::npos) out.push_back(part.substr(b, e - b + 1));
    }
    return out;
}

// Domain id named by the second line of an mmdp file.
std::string mmdp_domain_id(const std::string& text, const std::string& path) {
    std::istringstream in(text);
    std::string magic, key, id;
    std::getline(in, magic);
    in >> key >> id;
    if (key != "domain") throw FormatError(path + " is not an mmdp file");
    return id;
}

Domain domain_or(const std::string& given, const std::string& fallback_id) {
    if (!given.empty()) return resolve_domain(given);
    if (fallback_id.empty()) throw PreconditionError("--domain is required");
    return resolve_domain(fallback_id);
}

std::uint32_t parse_bits(const std::string& text) {
    try {
        if (text.rfind("0b", 0) == 0) return static_cast<std::uint32_t>(std::stoul(text.substr(2), nullptr, 2));
        std::size_t used = 0;
        const auto v = std::stoul(text, &used, 10);
        if (used != text.size()) throw std::invalid_argument(text);
        return static_cast<std::uint32_t>(v);
    } catch (const std::exception&) {
        throw PreconditionError("bad state value '" + text + "'");
    }
}

// "<index>" or per-agent bit values "1,0,0" (decimal or 0b-binary).
AbstractJointState parse_state(const std::string& text, const PolicyAbstraction& m) {
    if (text.find(',') == std::string::npos && m.agent_count() != 1) {
        const auto index = parse_bits(text);
        if (index >= m.state_count())
            throw UnknownStateError("state index " + text + " out of range (" + std::to_string(m.state_count()) +
                                    " states)");
        return m.state(index);
    }
    AbstractJointState s;
    for (const auto& part : split_csv(text)) s.agents.push_back(parse_bits(part));
    if (s.agents.size() != m.agent_count())
        throw PreconditionError("--state lists " + std::to_string(s.agents.size()) + " agents, domain has " +
                                std::to_string(m.agent_count()));
    return s;
}

std::string upper_env(const std::string& name) {
    std::string out = "XMARL_";
    for (char c : name) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

// Every long flag can also come from XMARL_<FLAG>.
void attach_env(CLI::App& app) {
    for (auto* opt : app.get_options()) {
        const auto& names = opt->get_lnames();
        if (names.empty() || names[0] == "help" || names[0] == "config") continue;
        if (opt->get_envname().empty()) opt->envname(upper_env(names[0]));
    }
    for (auto* sub : app.get_subcommands({})) attach_env(*sub);
}

struct Options {
    std::uint64_t seed = 42;

    std::string domain;
    std::string out;
    int episodes = 100;
    int max_steps = 200;
    ScriptedPolicy policy;

    std::string trace = "-";
    std::string normalization = "state";
    bool virtual_init = false;

    std::string mmdp;
    std::string format = "chart";

    std::string type;
    std::string agents;
    std::string actions;
    std::string state;
    std::string predicates;
    std::string method = "withrf";
    double timeout = 3600;
    bool emit_dnf = false;

    std::vector<std::string> bench_domains;
    std::string bench_format = "table";

    std::string table;
};

void cmd_simulate(const Options& o, std::ostream& out) {
    const auto domain = resolve_domain(o.domain);
    SimulationConfig config{domain.id(), o.policy, o.max_steps, o.episodes, o.seed};
    Sink sink(o.out, out);
    TraceWriter writer(*sink, domain);
    simulate(config, [&](const TraceSample& s) { writer.write(s); });
    sink.close();
}

void cmd_abstract(const Options& o, std::ostream& out) {
    std::ifstream file;
    std::istream* in = &std::cin;
    if (o.trace != "-") {
        file.open(o.trace, std::ios::binary);
        if (!file) throw PreconditionError("cannot read " + o.trace);
        in = &file;
    }
    const auto header = read_trace_header(*in);
    const auto domain = domain_or(o.domain, header.domain_id);
    if (header.agents.size() != domain.agent_count() || header.fields != domain.schema().state_fields())
        throw FormatError("trace does not match domain '" + domain.id() + "'");
    AbstractionBuilder builder(domain, {normalization_from_string(o.normalization), o.virtual_init});
    read_trace_samples(*in, domain, [&](const TraceSample& s) { builder.add(s); });
    const auto m = builder.build();
    Sink sink(o.out, out);
    save_abstraction(*sink, m);
    sink.close();
}

PolicyAbstraction load_mmdp(const Options& o) {
    if (o.mmdp.empty()) throw PreconditionError("--mmdp is required");
    // Read once so stdin and pipes work.
    std::ostringstream buf;
    if (o.mmdp == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(o.mmdp, std::ios::binary);
        if (!in) throw PreconditionError("cannot read " + o.mmdp);
        buf << in.rdbuf();
    }
    const auto text = buf.str();
    const auto domain = domain_or(o.domain, mmdp_domain_id(text, o.mmdp));
    std::istringstream in(text);
    return load_abstraction(in, domain);
}

void cmd_summarize(const Options& o, std::ostream& out) {
    const auto m = load_mmdp(o);
    const auto chart = summarize(m);
    Sink sink(o.out, out);
    *sink << render_chart(chart, chart_format_from_string(o.format));
    sink.close();
}

void cmd_explain(const Options& o, std::ostream& out, std::ostream& err) {
    const auto m = load_mmdp(o);
    const Domain& d = m.domain();
    check_phrases(d);
    Query q;
    q.kind = query_kind_from_string(o.type);
    q.method = method_from_string(o.method);
    for (const auto& name : split_csv(o.agents)) q.agents.push_back(d.agent_index(name));
    for (const auto& text : split_csv(o.actions)) q.actions.push_back(d.parse_agent_action(text));
    for (const auto& id : split_csv(o.predicates)) q.predicates.push_back(d.schema().require_index(id));
    if (!o.state.empty()) q.state = parse_state(o.state, m);

    QueryOptions options;
    if (o.timeout <= 0) throw PreconditionError("--timeout must be positive");
    options.minimize.deadline = std::chrono::steady_clock::now() +
                                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                    std::chrono::duration<double>(o.timeout));

    Sink sink(o.out, out);
    if (q.kind == QueryKind::what) {
        if (q.agents.empty()) throw PreconditionError("--agents is required for what queries");
        *sink << render_what(d, q, answer_what(q, m)) << '\n';
    } else {
        if (q.actions.empty()) throw PreconditionError("--actions is required for when and why-not queries");
        if (q.kind == QueryKind::whynot && !q.state) throw PreconditionError("--state is required for why-not queries");
        const auto answer = q.kind == QueryKind::when ? answer_when(q, m, options) : answer_whynot(q, m, options);
        if (!answer.exact) err << "warning: prime cover chosen greedily, clause count may not be minimal\n";
        *sink << render_condition(d, q, answer) << '\n';
        if (o.emit_dnf) *sink << "dnf: " << render_dnf(d, answer) << '\n';
    }
    sink.close();
}

void cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.bench_format != "table" && o.bench_format != "csv")
        throw PreconditionError("unknown bench format '" + o.bench_format + "' (expected table or csv)");
    auto ids = o.bench_domains.empty() ? builtin_domain_ids() : o.bench_domains;
    BenchConfig config;
    config.episodes = o.episodes;
    config.max_steps = o.max_steps;
    config.seed = o.seed;
    config.timeout_seconds = o.timeout;
    config.abstraction = {normalization_from_string(o.normalization), o.virtual_init};
    std::vector<BenchRow> rows;
    for (const auto& id : ids) {
        err << "bench: " << id << '\n';
        rows.push_back(bench_domain(id, config));
    }
    Sink sink(o.out, out);
    *sink << render_bench(rows, o.bench_format == "csv");
    sink.close();
}

void cmd_export_domain(const Options& o, std::ostream& out) {
    const auto domain = resolve_domain(o.domain);
    Sink sink(o.out, out);
    *sink << domain_to_json(domain);
    sink.close();
}

// Truth-table lines "<bits, x0 first> <0|1|->"; '#' starts a comment.
void cmd_boolmin_debug(const Options& o, std::ostream& out) {
    std::ifstream file;
    std::istream* in = &std::cin;
    if (!o.table.empty() && o.table != "-") {
        file.open(o.table);
        if (!file) throw PreconditionError("cannot read " + o.table);
        in = &file;
    }
    std::vector<Minterm> ones, zeros;
    std::size_t variables = 0;
    bool first = true;
    std::string line;
    while (std::getline(*in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string bits, value;
        if (!(fields >> bits)) continue;
        if (!(fields >> value) || (value != "0" && value != "1" && value != "-"))
            throw FormatError("truth-table line needs '<bits> <0|1|->': " + line);
        if (first) variables = bits.size();
        first = false;
        if (bits.size() != variables) throw FormatError("truth-table rows differ in width");
        if (variables > 32) throw SizeLimitError("too many variables", variables, 24);
        Minterm m = 0;
        for (std::size_t j = 0; j < bits.size(); ++j) {
            if (bits[j] != '0' && bits[j] != '1') throw FormatError("bad bit string '" + bits + "'");
            if (bits[j] == '1') m |= Minterm{1} << j;
        }
        if (value == "1") ones.push_back(m);
        if (value == "0") zeros.push_back(m);
    }
    const auto result = minimize(ones, zeros, variables);
    out << format_dnf(result.implicants, variables) << '\n';
    out << "# clauses " << result.implicants.size() << ", primes " << result.prime_count << ", "
        << (result.exact ? "minimum cover" : "greedy cover") << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Policy abstraction, summaries and query explanations for multi-agent policies", "xmarl"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read flags from a TOML/INI file");
    Options o;
    app.add_option("--seed", o.seed, "Random seed")->capture_default_str();

    auto* sim = app.add_subcommand("simulate", "Run a scripted policy and write a trace");
    sim->add_option("--domain", o.domain, "Built-in domain id")->required();
    sim->add_option("--episodes", o.episodes, "Episodes to run")->capture_default_str();
    sim->add_option("--max-steps", o.max_steps, "Step limit per episode")->capture_default_str();
    sim->add_option("--hesitation", o.policy.hesitation, "Chance a moving agent waits instead")->capture_default_str();
    sim->add_option("--hover", o.policy.hover, "Chance a waiting UAV repositions")->capture_default_str();
    sim->add_option("--futile", o.policy.futile, "Chance a waiting agent tries a joint action alone")
        ->capture_default_str();
    sim->add_option("--out", o.out, "Output path (default stdout)");

    auto* abs = app.add_subcommand("abstract", "Build the MMDP abstraction from a trace");
    abs->add_option("--trace", o.trace, "Trace file, - for stdin")->capture_default_str();
    abs->add_option("--domain", o.domain, "Domain id or definition file (default: from the trace)");
    abs->add_option("--normalization", o.normalization, "state | state-action")->capture_default_str();
    abs->add_flag("--virtual-init", o.virtual_init, "Allow differing initial states via a virtual source");
    abs->add_option("--out", o.out, "Output path (default stdout)");

    auto* sum = app.add_subcommand("summarize", "Most probable path and task chart");
    sum->add_option("--mmdp", o.mmdp, "Abstraction file, - for stdin")->required();
    sum->add_option("--domain", o.domain, "Domain id or definition file (default: from the file)");
    sum->add_option("--format", o.format, "chart | csv")->capture_default_str();
    sum->add_option("--out", o.out, "Output path (default stdout)");

    auto* exp = app.add_subcommand("explain", "Answer a when / whynot / what query");
    exp->add_option("--mmdp", o.mmdp, "Abstraction file, - for stdin")->required();
    exp->add_option("--domain", o.domain, "Domain id or definition file (default: from the file)");
    exp->add_option("--type", o.type, "when | whynot | what")->required();
    exp->add_option("--agents", o.agents, "Comma-separated agent names");
    exp->add_option("--actions", o.actions, "Comma-separated AGENT:ACTION pairs");
    exp->add_option("--state", o.state, "State index, or per-agent bit values like 1,0,0");
    exp->add_option("--predicates", o.predicates, "Comma-separated predicate ids");
    exp->add_option("--method", o.method, "norf | withrf")->capture_default_str();
    exp->add_option("--timeout", o.timeout, "Seconds before minimization gives up")->capture_default_str();
    exp->add_flag("--emit-dnf", o.emit_dnf, "Also print the minimized formula");
    exp->add_option("--out", o.out, "Output path (default stdout)");

    auto* bench = app.add_subcommand("bench", "Sizes, clause counts and timings per domain");
    bench->add_option("--domain", o.bench_domains, "Built-in domain ids (default: all)");
    bench->add_option("--episodes", o.episodes, "Episodes per domain")->capture_default_str();
    bench->add_option("--max-steps", o.max_steps, "Step limit per episode")->capture_default_str();
    bench->add_option("--timeout", o.timeout, "Seconds per query")->capture_default_str();
    bench->add_option("--normalization", o.normalization, "state | state-action")->capture_default_str();
    bench->add_flag("--virtual-init", o.virtual_init, "Allow differing initial states");
    bench->add_option("--format", o.bench_format, "table | csv")->capture_default_str();
    bench->add_option("--out", o.out, "Output path (default stdout)");

    auto* exd = app.add_subcommand("export-domain", "Write a domain definition file");
    exd->add_option("--domain", o.domain, "Built-in domain id")->required();
    exd->add_option("--out", o.out, "Output path (default stdout)");

    auto* dbg = app.add_subcommand("boolmin-debug", "");
    dbg->group("");
    dbg->add_option("--table", o.table, "Truth-table file, - for stdin");

    attach_env(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitInput;
    }

    try {
        if (sim->parsed()) cmd_simulate(o, out);
        if (abs->parsed()) cmd_abstract(o, out);
        if (sum->parsed()) cmd_summarize(o, out);
        if (exp->parsed()) cmd_explain(o, out, err);
        if (bench->parsed()) cmd_bench(o, out, err);
        if (exd->parsed()) cmd_export_domain(o, out);
        if (dbg->parsed()) cmd_boolmin_debug(o, out);
    } catch (const TimeoutError& e) {
        const auto& p = e.progress();
        err << "timeout: " << e.what() << "; partial progress: " << p.ones_expanded << " of " << p.ones_total
            << " target minterms expanded, " << p.primes_found << " prime implicants found\n";
        return kExitResource;
    } catch (const SizeLimitError& e) {
        err << "resource limit: " << e.what() << '\n';
        return kExitResource;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace xmarl
