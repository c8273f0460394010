#pragma once

#include "vendsim/machine.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vendsim {

struct StimulusEvent {
    std::uint64_t cycle = 0;
    std::string port;
    Value value = 0;

    bool operator==(const StimulusEvent&) const = default;
};

/// A testbench script: drives (held until re-driven), output expectations and a run length.
///
/// Text form, one directive per line, `#` starts a comment:
///
///     @<cycle> <port>=<value> [<port>=<value> ...]
///     expect @<cycle> <port>=<value> [...]
///     run <cycles>
///
/// Values are decimal or 0b-prefixed binary. Expectations compare the outputs
/// produced by the named cycle.
struct StimulusProgram {
    std::vector<StimulusEvent> drives;       // sorted by cycle, stable within a cycle
    std::vector<StimulusEvent> expectations; // sorted by cycle, stable within a cycle
    std::uint64_t length = 0;

    bool operator==(const StimulusProgram&) const = default;
};

// Throws ParseError naming the offending line.
StimulusProgram parse_stimulus(std::string_view text, const MachineDefinition& machine);

// Canonical text; parse_stimulus(render_stimulus(p)) == p for every valid p.
std::string render_stimulus(const StimulusProgram& program);

// Throws ContractError if the program names ports the machine does not drive/produce
// or values that do not fit.
void check_stimulus(const StimulusProgram& program, const MachineDefinition& machine);

// Dense per-cycle input assignments with hold semantics; undriven inputs are 0.
std::vector<std::vector<Value>> schedule(const StimulusProgram& program,
                                         const MachineDefinition& machine);

} // namespace vendsim
