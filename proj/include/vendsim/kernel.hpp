#pragma once

#include "vendsim/machine.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace vendsim {

// One cycle as seen on the wires: the state and registers during the cycle,
// the sampled inputs and the outputs they produced.
struct TraceRecord {
    std::uint64_t cycle = 0;
    StateId state = 0;
    std::vector<Value> registers;
    std::vector<Value> inputs;
    std::vector<Value> outputs;

    bool operator==(const TraceRecord&) const = default;
};

struct Trace {
    std::vector<TraceRecord> records;
    // When set, the last record is the settled view after the final clock edge
    // rather than a clocked cycle.
    bool settled = false;

    std::span<const TraceRecord> clocked() const {
        return std::span<const TraceRecord>(records).first(records.size() - (settled ? 1 : 0));
    }
    const TraceRecord& back() const { return records.back(); }
    bool empty() const { return records.empty(); }

    bool operator==(const Trace&) const = default;
};

struct KernelState {
    Configuration current;
    std::uint64_t cycle = 0;
    Trace trace;
    bool record = true;
};

KernelState start(const MachineDefinition& machine, bool record_trace = true);

/// One rising clock edge.
///
/// Outputs are computed from the pre-edge configuration (Mealy semantics). When
/// the machine's reset input is high, the configuration after the edge is the
/// reset configuration and the outputs are those of the initial state evaluated
/// with the same inputs.
std::vector<Value> step(const MachineDefinition& machine, KernelState& kernel,
                        std::span<const Value> inputs);

// Appends the settled record for the current configuration and marks the trace settled.
void settle(const MachineDefinition& machine, KernelState& kernel, std::span<const Value> inputs);

// Output of a Moore machine in `state`; KindError on a Mealy machine.
std::vector<Value> moore_output(const MachineDefinition& machine, const Configuration& state);

} // namespace vendsim
