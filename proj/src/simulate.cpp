#include "vendsim/simulate.hpp"

namespace vendsim {

std::string describe(const ExpectationFailure& f) {
    return "cycle " + std::to_string(f.cycle) + ": " + f.port + " expected " +
           std::to_string(f.expected) + ", got " + std::to_string(f.actual);
}

RunResult run(const MachineDefinition& machine, const StimulusProgram& stimulus) {
    const auto cycles = schedule(stimulus, machine);

    KernelState kernel = start(machine);
    for (const auto& inputs : cycles)
        step(machine, kernel, inputs);
    settle(machine, kernel, cycles.empty() ? machine.zero_inputs() : cycles.back());

    RunResult result;
    for (const auto& e : stimulus.expectations) {
        const auto port = *machine.find_output(e.port);
        const Value actual = kernel.trace.records[e.cycle].outputs[port];
        if (actual != e.value)
            result.failures.push_back({e.cycle, e.port, e.value, actual});
    }
    result.trace = std::move(kernel.trace);
    return result;
}

} // namespace vendsim
