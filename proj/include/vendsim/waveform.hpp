#pragma once

#include "vendsim/kernel.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace vendsim::vcd {

constexpr const char* kDeterministicDate = "(deterministic build)";

struct Variable {
    unsigned width = 1;
    std::string code;
    std::string name;
};

struct Change {
    std::size_t variable = 0;
    Value value = 0;
};

struct Timestep {
    std::uint64_t time = 0;
    std::vector<Change> changes;
};

struct Document {
    std::string date = kDeterministicDate;
    std::string timescale = "1 ns";
    std::string scope;
    std::vector<Variable> variables;
    std::vector<Change> initial;  // $dumpvars at #0; empty for an empty trace
    std::vector<Timestep> steps;  // strictly increasing times > 0, changes only
};

// Printable identifier for the i-th declared variable: "!", "\"", ..., "~", "!!", ...
std::string identifier_code(std::size_t index);

/// Ports in declaration order (inputs, then outputs) followed by a `state`
/// variable holding the canonical state index. One timestep per trace record.
Document trace_to_vcd(const Trace& trace, const MachineDefinition& machine);

// Throws IoError if the stream fails.
void write_vcd(const Document& doc, std::ostream& out);
std::string to_string(const Document& doc);

} // namespace vendsim::vcd
