#include "vendsim/stimulus.hpp"

#include "vendsim/errors.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <span>
#include <sstream>

namespace vendsim {

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i)
            words.push_back(line.substr(i, j - i));
        i = j;
    }
    return words;
}

std::optional<std::uint64_t> parse_number(std::string_view text) {
    int base = 10;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'b' || text[1] == 'B')) {
        base = 2;
        text.remove_prefix(2);
    }
    if (text.empty())
        return std::nullopt;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, base);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        return std::nullopt;
    return v;
}

std::uint64_t parse_cycle(std::string_view word, std::size_t line) {
    if (word.size() < 2 || word[0] != '@')
        throw ParseError(line, "expected @<cycle>, got '" + std::string(word) + "'");
    auto digits = word.substr(1);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc{} || ptr != digits.data() + digits.size())
        throw ParseError(line, "non-numeric cycle '" + std::string(digits) + "'");
    return v;
}

const PortDecl* lookup(const MachineDefinition& m, std::string_view name, bool drive) {
    if (drive) {
        auto i = m.find_input(name);
        return i ? &m.inputs()[*i] : nullptr;
    }
    auto o = m.find_output(name);
    return o ? &m.outputs()[*o] : nullptr;
}

void parse_assignments(std::span<const std::string_view> words, std::uint64_t cycle,
                       bool drive, const MachineDefinition& machine, std::size_t line,
                       std::vector<StimulusEvent>& into) {
    if (words.empty())
        throw ParseError(line, "expected at least one <port>=<value>");
    for (auto word : words) {
        auto eq = word.find('=');
        if (eq == std::string_view::npos || eq == 0)
            throw ParseError(line, "expected <port>=<value>, got '" + std::string(word) + "'");
        auto name = word.substr(0, eq);
        auto value_text = word.substr(eq + 1);
        const PortDecl* port = lookup(machine, name, drive);
        if (!port) {
            if (drive && machine.find_output(name))
                throw ParseError(line, "port '" + std::string(name) + "' is not drivable");
            if (!drive && machine.find_input(name))
                throw ParseError(line, "port '" + std::string(name) + "' is not an output");
            throw ParseError(line, "unknown port '" + std::string(name) + "'");
        }
        auto value = parse_number(value_text);
        if (!value)
            throw ParseError(line, "bad value '" + std::string(value_text) + "'");
        if (!fits(*value, port->width))
            throw ParseError(line, "value " + std::to_string(*value) + " exceeds " +
                                       std::to_string(port->width) + "-bit port " + port->name);
        into.push_back({cycle, std::string(name), *value});
    }
}

void sort_events(std::vector<StimulusEvent>& events) {
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.cycle < b.cycle; });
}

void render_events(std::ostringstream& out, const std::vector<StimulusEvent>& events,
                   const char* prefix) {
    for (std::size_t i = 0; i < events.size();) {
        out << prefix << '@' << events[i].cycle;
        std::size_t j = i;
        for (; j < events.size() && events[j].cycle == events[i].cycle; ++j)
            out << ' ' << events[j].port << '=' << events[j].value;
        out << '\n';
        i = j;
    }
}

} // namespace

StimulusProgram parse_stimulus(std::string_view text, const MachineDefinition& machine) {
    StimulusProgram program;
    std::optional<std::uint64_t> run;
    std::uint64_t max_cycle = 0;
    std::size_t max_cycle_line = 0;
    bool any_event = false;

    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        auto words = split_words(line);
        if (words.empty())
            continue;

        std::span<const std::string_view> rest(words);
        if (words[0] == "run") {
            if (run)
                throw ParseError(line_no, "duplicate 'run'");
            if (words.size() != 2)
                throw ParseError(line_no, "expected 'run <cycles>'");
            auto n = parse_number(words[1]);
            if (!n || words[1].starts_with("0b"))
                throw ParseError(line_no, "non-numeric run length '" + std::string(words[1]) + "'");
            run = *n;
            continue;
        }

        bool drive = true;
        if (words[0] == "expect") {
            drive = false;
            rest = rest.subspan(1);
            if (rest.empty())
                throw ParseError(line_no, "expected @<cycle> after 'expect'");
        } else if (!words[0].starts_with("@")) {
            throw ParseError(line_no, "unknown directive '" + std::string(words[0]) + "'");
        }

        const auto cycle = parse_cycle(rest[0], line_no);
        parse_assignments(rest.subspan(1), cycle, drive, machine, line_no,
                          drive ? program.drives : program.expectations);
        if (!any_event || cycle > max_cycle) {
            max_cycle = cycle;
            max_cycle_line = line_no;
        }
        any_event = true;
    }

    if (!run)
        throw ParseError(line_no == 0 ? 1 : line_no, "missing 'run <cycles>'");
    if (any_event && max_cycle >= *run)
        throw ParseError(max_cycle_line, "cycle " + std::to_string(max_cycle) +
                                             " is beyond run length " + std::to_string(*run));
    program.length = *run;
    sort_events(program.drives);
    sort_events(program.expectations);
    return program;
}

std::string render_stimulus(const StimulusProgram& program) {
    std::ostringstream out;
    render_events(out, program.drives, "");
    render_events(out, program.expectations, "expect ");
    out << "run " << program.length << '\n';
    return out.str();
}

void check_stimulus(const StimulusProgram& program, const MachineDefinition& machine) {
    auto check = [&](const StimulusEvent& e, bool drive) {
        const PortDecl* port = lookup(machine, e.port, drive);
        if (!port)
            throw ContractError("stimulus references port '" + e.port + "' which " +
                                machine.name() + (drive ? " cannot sample" : " does not produce"));
        if (!fits(e.value, port->width))
            throw ContractError("stimulus value " + std::to_string(e.value) + " exceeds port " +
                                e.port);
        if (e.cycle >= program.length)
            throw ContractError("stimulus event at cycle " + std::to_string(e.cycle) +
                                " is beyond run length");
    };
    auto by_cycle = [](const auto& a, const auto& b) { return a.cycle < b.cycle; };
    if (!std::is_sorted(program.drives.begin(), program.drives.end(), by_cycle) ||
        !std::is_sorted(program.expectations.begin(), program.expectations.end(), by_cycle))
        throw ContractError("stimulus events are not sorted by cycle");
    for (const auto& d : program.drives)
        check(d, true);
    for (const auto& e : program.expectations)
        check(e, false);
}

std::vector<std::vector<Value>> schedule(const StimulusProgram& program,
                                         const MachineDefinition& machine) {
    check_stimulus(program, machine);
    std::vector<std::vector<Value>> cycles;
    cycles.reserve(program.length);
    std::vector<Value> held = machine.zero_inputs();
    std::size_t next = 0;
    for (std::uint64_t c = 0; c < program.length; ++c) {
        for (; next < program.drives.size() && program.drives[next].cycle <= c; ++next) {
            const auto& d = program.drives[next];
            held[*machine.find_input(d.port)] = d.value;
        }
        cycles.push_back(held);
    }
    return cycles;
}

} // namespace vendsim
