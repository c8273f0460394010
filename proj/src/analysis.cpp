#include "vendsim/analysis.hpp"

#include "vendsim/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <sstream>
#include <tuple>

namespace vendsim::analysis {

namespace {

std::vector<std::size_t> decision_ports(const MachineDefinition& m) {
    std::vector<std::size_t> ports;
    for (std::size_t i = 0; i < m.inputs().size(); ++i)
        if (!m.reset_port() || *m.reset_port() != i)
            ports.push_back(i);
    return ports;
}

bool satisfiable(const Guard& g) {
    for (std::size_t i = 0; i < g.cube.size(); ++i)
        for (std::size_t j = i + 1; j < g.cube.size(); ++j)
            if (g.cube[i].port == g.cube[j].port && g.cube[i].value != g.cube[j].value)
                return false;
    return true;
}

std::string render_outputs(const MachineDefinition& m, std::span<const Value> outputs) {
    std::string s;
    for (std::size_t k = 0; k < outputs.size(); ++k) {
        if (k)
            s += ',';
        s += m.outputs()[k].name + "=" + std::to_string(outputs[k]);
    }
    return s;
}

MachineBuilder copy_ports(const MachineDefinition& m, MachineKind kind, std::string name) {
    MachineBuilder b(std::move(name), kind);
    for (std::size_t i = 0; i < m.inputs().size(); ++i) {
        if (m.reset_port() && *m.reset_port() == i)
            b.add_reset(m.inputs()[i].name);
        else
            b.add_input(m.inputs()[i].name, m.inputs()[i].width);
    }
    for (const auto& o : m.outputs())
        b.add_output(o.name, o.width, o.direction);
    return b;
}

MachineDefinition pair_construction(const MachineDefinition& mealy) {
    std::vector<std::vector<Value>> alphabet;
    for_each_assignment(mealy, [&](std::span<const Value> a) {
        alphabet.emplace_back(a.begin(), a.end());
    });

    using Pair = std::pair<StateId, std::vector<Value>>;
    std::map<Pair, StateId> index;
    std::vector<Pair> pairs;
    std::vector<std::vector<StateId>> successors;
    auto intern = [&](Pair p) {
        auto [it, inserted] = index.emplace(p, static_cast<StateId>(pairs.size()));
        if (inserted)
            pairs.push_back(std::move(p));
        return it->second;
    };

    const Configuration start{mealy.initial(), {}};
    intern({mealy.initial(), mealy.output(start, mealy.zero_inputs())});
    for (std::size_t next = 0; next < pairs.size(); ++next) {
        std::vector<StateId> row;
        const Configuration from{pairs[next].first, {}};
        for (const auto& a : alphabet) {
            auto r = mealy.evaluate(from, a);
            row.push_back(intern({r.next.state, std::move(r.outputs)}));
        }
        successors.push_back(std::move(row));
    }

    MachineBuilder b = copy_ports(mealy, MachineKind::moore, mealy.name() + "_moore");
    for (const auto& [state, outputs] : pairs)
        b.add_state(mealy.state_name(state) + "/" + render_outputs(mealy, outputs));
    b.set_initial(0);

    const auto ports = decision_ports(mealy);
    for (StateId s = 0; s < pairs.size(); ++s) {
        b.on_state(s, [outputs = pairs[s].second](Evaluation& ev) {
            for (std::size_t k = 0; k < outputs.size(); ++k)
                ev.set_output(k, outputs[k]);
        });
        // The most frequent successor becomes the default arm.
        std::map<StateId, std::size_t> freq;
        for (auto t : successors[s])
            ++freq[t];
        const StateId fallback =
            std::max_element(freq.begin(), freq.end(), [](const auto& x, const auto& y) {
                return x.second < y.second;
            })->first;
        for (std::size_t a = 0; a < alphabet.size(); ++a) {
            if (successors[s][a] == fallback)
                continue;
            Guard g;
            for (auto port : ports)
                g.cube.push_back({port, alphabet[a][port]});
            b.when(s, std::move(g), successors[s][a]);
        }
        b.otherwise(s, fallback);
    }
    return std::move(b).build();
}

MachineDefinition latch_construction(const MachineDefinition& mealy_in) {
    auto mealy = std::make_shared<const MachineDefinition>(mealy_in);
    const std::size_t m = mealy->registers().size();
    const std::size_t outs = mealy->outputs().size();

    MachineBuilder b = copy_ports(*mealy, MachineKind::moore, mealy->name() + "_moore");
    for (const auto& r : mealy->registers())
        b.add_register(r);
    const auto initial_out = mealy->output(mealy->initial_configuration(), mealy->zero_inputs());
    for (std::size_t k = 0; k < outs; ++k) {
        std::string name = mealy->outputs()[k].name + "_q";
        while (mealy->find_register(name) || mealy->find_input(name) || mealy->find_output(name))
            name += "_";
        b.add_register({name, mealy->outputs()[k].width, initial_out[k], false});
    }

    for (StateId s = 0; s < mealy->state_count(); ++s)
        b.add_state(mealy->state_name(s));
    b.set_initial(mealy->initial());

    auto latch = [mealy, m, outs](Evaluation& ev) {
        Configuration inner{ev.state(), {ev.current().registers.begin(),
                                         ev.current().registers.begin() + m}};
        auto r = mealy->evaluate(inner, ev.inputs());
        for (std::size_t i = 0; i < m; ++i)
            ev.set_reg(i, r.next.registers[i]);
        for (std::size_t k = 0; k < outs; ++k)
            ev.set_reg(m + k, r.outputs[k]);
    };

    for (StateId s = 0; s < mealy->state_count(); ++s) {
        b.on_state(s, [m, outs](Evaluation& ev) {
            for (std::size_t k = 0; k < outs; ++k)
                ev.set_output(k, ev.reg(m + k));
        });
        const auto& arms = mealy->state_case(s).arms;
        for (const auto& arm : arms) {
            if (arm.is_default)
                b.otherwise(s, arm.next, latch);
            else
                b.when(s, arm.guard, arm.next, latch);
        }
    }
    return std::move(b).build();
}

} // namespace

void for_each_assignment(const MachineDefinition& machine,
                         const std::function<void(std::span<const Value>)>& visit) {
    const unsigned width = machine.decision_input_width();
    if (width > kEnumerationCap)
        throw AnalysisError(machine.name() + ": " + std::to_string(width) +
                            " decision input bits exceed the enumeration cap of " +
                            std::to_string(kEnumerationCap) + "; project away unused ports");
    const auto ports = decision_ports(machine);
    std::vector<Value> assignment = machine.zero_inputs();
    const std::uint64_t total = std::uint64_t{1} << width;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t rest = code;
        for (auto port : ports) {
            const unsigned w = machine.inputs()[port].width;
            assignment[port] = rest & max_value(w);
            rest >>= w;
        }
        visit(assignment);
    }
}

bool Reachability::contains(StateId s) const {
    return std::binary_search(reachable.begin(), reachable.end(), s);
}

Reachability reachable_states(const MachineDefinition& machine) {
    const std::size_t n = machine.state_count();
    std::vector<bool> seen(n, false);
    std::deque<StateId> queue{machine.initial()};
    seen[machine.initial()] = true;
    Reachability result;
    result.symbolic = !machine.registers().empty();

    std::vector<std::vector<Value>> alphabet;
    if (!result.symbolic)
        for_each_assignment(machine, [&](std::span<const Value> a) {
            alphabet.emplace_back(a.begin(), a.end());
        });

    auto visit = [&](StateId t) {
        if (!seen[t]) {
            seen[t] = true;
            queue.push_back(t);
        }
    };
    while (!queue.empty()) {
        const StateId s = queue.front();
        queue.pop_front();
        if (result.symbolic) {
            for (const auto& arm : machine.state_case(s).arms)
                if (satisfiable(arm.guard))
                    visit(arm.next);
        } else {
            const Configuration from{s, {}};
            for (const auto& a : alphabet)
                visit(machine.transition(from, a));
        }
    }

    for (StateId s = 0; s < n; ++s)
        (seen[s] ? result.reachable : result.unreachable).push_back(s);
    return result;
}

std::string guard_label(const MachineDefinition& machine, const Arm& arm) {
    if (arm.is_default)
        return "else";
    std::string label;
    for (const auto& lit : arm.guard.cube) {
        if (!label.empty())
            label += " & ";
        const auto& port = machine.inputs()[lit.port];
        if (port.width == 1)
            label += (lit.value ? "" : "!") + port.name;
        else
            label += port.name + "==" + std::to_string(lit.value);
    }
    if (arm.guard.condition) {
        if (!label.empty())
            label += " & ";
        label += arm.guard.condition->label;
    }
    return label.empty() ? "true" : label;
}

std::string to_dot(const MachineDefinition& machine) {
    std::ostringstream out;
    out << "digraph \"" << machine.name() << "\" {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=circle];\n";
    for (StateId s = 0; s < machine.state_count(); ++s) {
        out << "  \"" << machine.state_name(s) << '"';
        if (s == machine.initial())
            out << " [shape=doublecircle]";
        out << ";\n";
    }
    for (StateId s = 0; s < machine.state_count(); ++s) {
        std::vector<std::pair<std::string, StateId>> edges;
        for (const auto& arm : machine.state_case(s).arms)
            edges.emplace_back(guard_label(machine, arm), arm.next);
        std::sort(edges.begin(), edges.end());
        for (const auto& [label, target] : edges)
            out << "  \"" << machine.state_name(s) << "\" -> \"" << machine.state_name(target)
                << "\" [label=\"" << label << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

MachineDefinition mealy_to_moore(const MachineDefinition& machine) {
    if (machine.kind() != MachineKind::mealy)
        throw KindError("mealy_to_moore: '" + machine.name() + "' is already a Moore machine");
    if (machine.registers().empty())
        return pair_construction(machine);
    return latch_construction(machine);
}

ResourceReport resource_report(const MachineDefinition& machine) {
    ResourceReport r;
    r.machine = machine.name();
    r.states = machine.state_count();
    for (StateId s = 0; s < machine.state_count(); ++s)
        r.transitions += machine.state_case(s).arms.size();
    r.min_state_bits = bits_for(r.states);
    r.io_bits = machine.io_width();
    for (const auto& reg : machine.registers())
        r.register_bits += reg.width;
    return r;
}

std::string to_json(const ResourceReport& report) {
    nlohmann::ordered_json doc;
    doc["machine"] = report.machine;
    doc["states"] = report.states;
    doc["transitions"] = report.transitions;
    doc["min_state_bits"] = report.min_state_bits;
    doc["io_bits"] = report.io_bits;
    doc["register_bits"] = report.register_bits;
    return doc.dump(2) + "\n";
}

} // namespace vendsim::analysis
