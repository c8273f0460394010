#include "vendsim/waveform.hpp"

#include "vendsim/errors.hpp"

#include <algorithm>
#include <sstream>

namespace vendsim::vcd {

std::string identifier_code(std::size_t index) {
    constexpr std::size_t radix = 94; // '!' .. '~'
    std::string code;
    do {
        code.push_back(static_cast<char>('!' + index % radix));
        index /= radix;
    } while (index-- > 0);
    return code;
}

Document trace_to_vcd(const Trace& trace, const MachineDefinition& machine) {
    Document doc;
    doc.scope = machine.name();
    for (const auto& p : machine.inputs())
        doc.variables.push_back({p.width, "", p.name});
    for (const auto& p : machine.outputs())
        doc.variables.push_back({p.width, "", p.name});
    doc.variables.push_back(
        {std::max(1u, bits_for(machine.state_count())), "", "state"});
    for (std::size_t i = 0; i < doc.variables.size(); ++i)
        doc.variables[i].code = identifier_code(i);

    auto values_of = [&](const TraceRecord& rec) {
        std::vector<Value> v(rec.inputs);
        v.insert(v.end(), rec.outputs.begin(), rec.outputs.end());
        v.push_back(rec.state);
        return v;
    };

    std::vector<Value> previous;
    for (const auto& rec : trace.records) {
        auto current = values_of(rec);
        if (previous.empty()) {
            for (std::size_t i = 0; i < current.size(); ++i)
                doc.initial.push_back({i, current[i]});
        } else {
            Timestep ts{rec.cycle, {}};
            for (std::size_t i = 0; i < current.size(); ++i)
                if (current[i] != previous[i])
                    ts.changes.push_back({i, current[i]});
            if (!ts.changes.empty())
                doc.steps.push_back(std::move(ts));
        }
        previous = std::move(current);
    }
    return doc;
}

namespace {

void write_change(std::ostream& out, const Document& doc, const Change& c) {
    const auto& var = doc.variables.at(c.variable);
    if (var.width == 1)
        out << (c.value ? '1' : '0') << var.code << '\n';
    else
        out << 'b' << SignalValue(c.value, var.width).binary() << ' ' << var.code << '\n';
}

} // namespace

void write_vcd(const Document& doc, std::ostream& out) {
    out << "$date " << doc.date << " $end\n";
    out << "$timescale " << doc.timescale << " $end\n";
    out << "$scope module " << doc.scope << " $end\n";
    for (const auto& v : doc.variables)
        out << "$var wire " << v.width << ' ' << v.code << ' ' << v.name << " $end\n";
    out << "$upscope $end\n";
    out << "$enddefinitions $end\n";
    if (!doc.initial.empty()) {
        out << "#0\n$dumpvars\n";
        for (const auto& c : doc.initial)
            write_change(out, doc, c);
        out << "$end\n";
    }
    for (const auto& ts : doc.steps) {
        out << '#' << ts.time << '\n';
        for (const auto& c : ts.changes)
            write_change(out, doc, c);
    }
    out.flush();
    if (!out)
        throw IoError("failed writing VCD stream");
}

std::string to_string(const Document& doc) {
    std::ostringstream out;
    write_vcd(doc, out);
    return out.str();
}

} // namespace vendsim::vcd
