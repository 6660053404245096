#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "xmarl/abstraction.hpp"

namespace xmarl {

namespace {

constexpr const char* kMagic = "xmarl-mmdp 1";

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string format_probability(double p) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep)) out.push_back(part);
    return out;
}

class LineReader {
public:
    explicit LineReader(std::istringstream& in) : in_(in) {}

    std::istringstream next(std::string_view keyword = {}) {
        std::string line;
        if (!std::getline(in_, line)) throw FormatError("mmdp file ends early");
        ++number_;
        std::istringstream fields(line);
        if (!keyword.empty()) {
            std::string word;
            fields >> word;
            if (word != keyword)
                throw FormatError("mmdp line " + std::to_string(number_) + ": expected '" + std::string(keyword) +
                                  "'");
        }
        return fields;
    }

    template <typename T>
    T value(std::string_view keyword) {
        auto fields = next(keyword);
        T v{};
        if (!(fields >> v)) throw FormatError("mmdp line " + std::to_string(number_) + ": bad value");
        return v;
    }

    std::size_t line() const { return number_; }

private:
    std::istringstream& in_;
    std::size_t number_ = 0;
};

void expect_names(std::istringstream fields, const std::vector<std::string>& names, const char* what) {
    std::size_t count = 0;
    fields >> count;
    std::vector<std::string> got;
    std::string name;
    while (fields >> name) got.push_back(name);
    if (count != got.size() || got != names)
        throw FormatError(std::string("mmdp ") + what + " do not match the domain");
}

}  // namespace

void save_abstraction(std::ostream& out, const PolicyAbstraction& m) {
    if (m.state_count() == 0 || m.transitions().empty()) throw PreconditionError("cannot save an empty abstraction");
    const Domain& d = m.domain();
    std::ostringstream body;
    body << kMagic << '\n';
    body << "domain " << d.id() << '\n';
    body << "schema " << hex64(d.schema().hash()) << '\n';
    body << "agents " << d.agent_count();
    for (const auto& a : d.agents()) body << ' ' << a.name;
    body << "\nfeatures " << d.schema().size();
    for (const auto& p : d.schema().predicates()) body << ' ' << p.id;
    body << "\nactions " << d.actions().size();
    for (const auto& a : d.actions()) body << ' ' << a.id;
    body << "\nnormalization " << to_string(m.normalization()) << '\n';
    body << "goal " << to_string(d.goal_mode()) << '\n';
    body << "virtual " << (m.has_virtual_source() ? 1 : 0) << '\n';
    body << "initial " << m.initial() << '\n';
    body << "states " << m.state_count() << '\n';
    for (std::size_t i = 0; i < m.state_count(); ++i) {
        body << i;
        if (m.is_virtual(i)) body << " -";
        for (auto bits : m.state(i).agents) body << ' ' << bits;
        body << ' ' << m.visits(i) << '\n';
    }
    body << "transitions " << m.transitions().size() << '\n';
    for (const auto& t : m.transitions()) {
        body << t.src << ' ';
        if (t.action.actions.empty()) body << '-';
        for (std::size_t i = 0; i < t.action.actions.size(); ++i)
            body << (i ? "," : "") << d.action(t.action.actions[i]).id;
        body << ' ' << t.dst << ' ' << t.count << ' ' << format_probability(t.probability) << '\n';
    }
    const std::string text = body.str();
    out << text << "checksum " << hex64(fnv1a64(text)) << '\n';
}

void save_abstraction(const std::string& path, const PolicyAbstraction& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PreconditionError("cannot write " + path);
    save_abstraction(out, m);
    if (!out) throw PreconditionError("failed writing " + path);
}

PolicyAbstraction load_abstraction(std::istream& in, const Domain& domain) {
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (all.rfind(kMagic, 0) != 0) throw FormatError("not an mmdp file or unsupported version");

    // The checksum line covers every byte before it.
    const auto pos = all.rfind("checksum ");
    if (pos == std::string::npos || (pos > 0 && all[pos - 1] != '\n'))
        throw FormatError("mmdp checksum missing (file truncated?)");
    const std::string body = all.substr(0, pos);
    std::string stored = all.substr(pos + 9);
    while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) stored.pop_back();
    if (stored != hex64(fnv1a64(body))) throw FormatError("mmdp checksum mismatch");

    std::istringstream text(body);
    LineReader lines(text);
    lines.next();
    const auto id = lines.value<std::string>("domain");
    if (id != domain.id()) throw FormatError("mmdp was built for domain '" + id + "', not '" + domain.id() + "'");
    if (lines.value<std::string>("schema") != hex64(domain.schema().hash()))
        throw FormatError("mmdp schema hash does not match domain '" + domain.id() + "'");

    std::vector<std::string> names;
    for (const auto& a : domain.agents()) names.push_back(a.name);
    expect_names(lines.next("agents"), names, "agents");
    names.clear();
    for (const auto& p : domain.schema().predicates()) names.push_back(p.id);
    expect_names(lines.next("features"), names, "features");
    names.clear();
    for (const auto& a : domain.actions()) names.push_back(a.id);
    expect_names(lines.next("actions"), names, "actions");

    PolicyAbstraction m;
    m.domain_ = domain;
    m.normalization_ = normalization_from_string(lines.value<std::string>("normalization"));
    if (goal_mode_from_string(lines.value<std::string>("goal")) != domain.goal_mode())
        throw FormatError("mmdp goal mode does not match the domain");
    m.virtual_source_ = lines.value<int>("virtual") != 0;
    m.initial_ = lines.value<std::size_t>("initial");

    const auto state_count = lines.value<std::size_t>("states");
    for (std::size_t i = 0; i < state_count; ++i) {
        auto fields = lines.next();
        std::size_t index = 0;
        fields >> index;
        if (index != i) throw FormatError("mmdp line " + std::to_string(lines.line()) + ": states out of order");
        AbstractJointState s;
        std::vector<std::uint64_t> numbers;
        std::string word;
        bool is_virtual = false;
        while (fields >> word) {
            if (word == "-") {
                is_virtual = true;
                continue;
            }
            try {
                numbers.push_back(std::stoull(word));
            } catch (const std::exception&) {
                throw FormatError("mmdp line " + std::to_string(lines.line()) + ": bad number '" + word + "'");
            }
        }
        const std::size_t expected = is_virtual ? 1 : domain.agent_count() + 1;
        if (numbers.size() != expected)
            throw FormatError("mmdp line " + std::to_string(lines.line()) + ": wrong number of fields");
        for (std::size_t k = 0; k + 1 < numbers.size(); ++k) s.agents.push_back(static_cast<std::uint32_t>(numbers[k]));
        m.states_.push_back(std::move(s));
        m.visits_.push_back(numbers.back());
    }
    if (!std::is_sorted(m.states_.begin(), m.states_.end()))
        throw FormatError("mmdp state table is not in canonical order");

    const auto transition_count = lines.value<std::size_t>("transitions");
    for (std::size_t i = 0; i < transition_count; ++i) {
        auto fields = lines.next();
        Transition t;
        std::string action;
        std::string probability;
        if (!(fields >> t.src >> action >> t.dst >> t.count >> probability))
            throw FormatError("mmdp line " + std::to_string(lines.line()) + ": malformed transition");
        if (t.src >= state_count || t.dst >= state_count)
            throw FormatError("mmdp line " + std::to_string(lines.line()) + ": state index out of range");
        if (action != "-") {
            for (const auto& a : split(action, ','))
                t.action.actions.push_back(static_cast<std::uint16_t>(domain.action_index(a)));
            if (t.action.actions.size() != domain.agent_count())
                throw FormatError("mmdp line " + std::to_string(lines.line()) + ": wrong joint action width");
        }
        t.probability = std::strtod(probability.c_str(), nullptr);
        m.transitions_.push_back(std::move(t));
    }
    if (m.initial_ >= state_count) throw FormatError("mmdp initial state out of range");
    m.index();
    return m;
}

PolicyAbstraction load_abstraction(const std::string& path, const Domain& domain) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot read " + path);
    return load_abstraction(in, domain);
}

}  // namespace xmarl
