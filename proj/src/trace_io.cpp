#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

#include "json.hpp"
#include "xmarl/envs.hpp"

namespace xmarl {

namespace {

constexpr const char* kTraceFormat = "xmarl-trace/1";

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json state_json(const ConcreteJointState& s) {
    ordered_json out = ordered_json::array();
    for (const auto& agent : s) out.push_back(agent);
    return out;
}

ConcreteJointState parse_state(const json& j, const Domain& domain, std::size_t line) {
    const auto fields = domain.schema().state_fields().size();
    if (!j.is_array() || j.size() != domain.agent_count())
        throw FormatError("trace line " + std::to_string(line) + ": state must list " +
                          std::to_string(domain.agent_count()) + " agents");
    ConcreteJointState out;
    for (const auto& agent : j) {
        if (!agent.is_array() || agent.size() != fields)
            throw FormatError("trace line " + std::to_string(line) + ": agent state must have " +
                              std::to_string(fields) + " fields");
        out.push_back(agent.get<ConcreteAgentState>());
    }
    return out;
}

}  // namespace

TraceWriter::TraceWriter(std::ostream& out, const Domain& domain) : out_(out), domain_(domain) {
    ordered_json header;
    header["format"] = kTraceFormat;
    header["domain"] = domain.id();
    ordered_json agents = ordered_json::array();
    for (const auto& a : domain.agents()) agents.push_back(a.name);
    header["agents"] = agents;
    header["fields"] = domain.schema().state_fields();
    out_ << header.dump() << '\n';
}

void TraceWriter::write(const TraceSample& sample) {
    ordered_json line;
    line["episode"] = sample.episode;
    line["step"] = sample.step;
    line["state"] = state_json(sample.state);
    ordered_json actions = ordered_json::array();
    for (auto a : sample.action.actions) actions.push_back(domain_.action(a).id);
    line["action"] = actions;
    line["next"] = state_json(sample.next);
    out_ << line.dump() << '\n';
}

TraceHeader read_trace_header(std::istream& in) {
    std::string text;
    if (!std::getline(in, text)) throw FormatError("trace is empty");
    json header;
    try {
        header = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("trace header is not valid JSON: ") + e.what());
    }
    if (!header.is_object() || header.value("format", "") != kTraceFormat)
        throw FormatError(std::string("trace header must declare format ") + kTraceFormat);
    try {
        return {header.at("domain").get<std::string>(), header.at("agents").get<std::vector<std::string>>(),
                header.at("fields").get<std::vector<std::string>>()};
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed trace header: ") + e.what());
    }
}

void read_trace_samples(std::istream& in, const Domain& domain, const SampleSink& sink) {
    std::string text;
    std::size_t line = 1;
    std::optional<TraceSample> previous;
    while (std::getline(in, text)) {
        ++line;
        if (text.empty()) continue;
        TraceSample s;
        try {
            const json j = json::parse(text);
            s.episode = j.at("episode").get<std::uint64_t>();
            s.step = j.at("step").get<std::uint64_t>();
            s.state = parse_state(j.at("state"), domain, line);
            s.next = parse_state(j.at("next"), domain, line);
            const auto& actions = j.at("action");
            if (!actions.is_array() || actions.size() != domain.agent_count())
                throw FormatError("trace line " + std::to_string(line) + ": one action per agent required");
            for (std::size_t i = 0; i < actions.size(); ++i) {
                const auto a = domain.action_index(actions[i].get<std::string>());
                if (!domain.in_alphabet(i, a))
                    throw FormatError("trace line " + std::to_string(line) + ": action '" + domain.action(a).id +
                                      "' is not available to " + domain.agent(i).name);
                s.action.actions.push_back(static_cast<std::uint16_t>(a));
            }
        } catch (const json::exception& e) {
            throw FormatError("trace line " + std::to_string(line) + ": " + e.what());
        }
        const bool continues = previous && previous->episode == s.episode;
        if (continues) {
            if (s.step != previous->step + 1)
                throw FormatError("trace line " + std::to_string(line) + ": steps must be consecutive");
            if (s.state != previous->next)
                throw FormatError("trace line " + std::to_string(line) +
                                  ": state differs from the previous sample's next state");
        } else if (s.step != 0) {
            throw FormatError("trace line " + std::to_string(line) + ": episode must start at step 0");
        }
        sink(s);
        previous = std::move(s);
    }
}

void write_trace_file(const std::string& path, const Domain& domain, const std::vector<TraceSample>& samples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PreconditionError("cannot write " + path);
    TraceWriter writer(out, domain);
    for (const auto& s : samples) writer.write(s);
    if (!out) throw PreconditionError("failed writing " + path);
}

std::vector<TraceSample> read_trace_file(const std::string& path, const Domain& domain) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot read " + path);
    const auto header = read_trace_header(in);
    if (header.agents.size() != domain.agent_count())
        throw FormatError("trace has " + std::to_string(header.agents.size()) + " agents, domain '" + domain.id() +
                          "' has " + std::to_string(domain.agent_count()));
    for (std::size_t i = 0; i < header.agents.size(); ++i)
        if (header.agents[i] != domain.agent(i).name)
            throw FormatError("trace agent '" + header.agents[i] + "' does not match domain agent '" +
                              domain.agent(i).name + "'");
    if (header.fields != domain.schema().state_fields())
        throw FormatError("trace state fields do not match domain '" + domain.id() + "'");
    std::vector<TraceSample> out;
    read_trace_samples(in, domain, [&](const TraceSample& s) { out.push_back(s); });
    return out;
}

}  // namespace xmarl
