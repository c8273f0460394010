#include "vendsim/kernel.hpp"

#include "vendsim/errors.hpp"

namespace vendsim {

KernelState start(const MachineDefinition& machine, bool record_trace) {
    KernelState k;
    k.current = machine.initial_configuration();
    k.record = record_trace;
    return k;
}

std::vector<Value> step(const MachineDefinition& machine, KernelState& kernel,
                        std::span<const Value> inputs) {
    machine.check_inputs(inputs);
    if (kernel.trace.settled)
        throw ContractError("cannot step a kernel whose trace is already settled");

    const auto reset = machine.reset_port();
    StepResult r;
    if (reset && inputs[*reset] != 0) {
        Configuration restart = machine.reset_configuration(kernel.current);
        r.outputs = machine.evaluate(restart, inputs).outputs;
        r.next = std::move(restart);
    } else {
        r = machine.evaluate(kernel.current, inputs);
    }

    if (kernel.record) {
        kernel.trace.records.push_back({kernel.cycle, kernel.current.state,
                                        kernel.current.registers,
                                        {inputs.begin(), inputs.end()}, r.outputs});
    }
    kernel.current = std::move(r.next);
    ++kernel.cycle;
    return std::move(r.outputs);
}

void settle(const MachineDefinition& machine, KernelState& kernel, std::span<const Value> inputs) {
    machine.check_inputs(inputs);
    if (kernel.trace.settled)
        return;
    // The reset input is sampled at an edge that has not happened yet.
    std::vector<Value> view(inputs.begin(), inputs.end());
    auto outputs = machine.evaluate(kernel.current, view).outputs;
    kernel.trace.records.push_back({kernel.cycle, kernel.current.state, kernel.current.registers,
                                    std::move(view), std::move(outputs)});
    kernel.trace.settled = true;
}

std::vector<Value> moore_output(const MachineDefinition& machine, const Configuration& state) {
    return machine.state_output(state);
}

} // namespace vendsim
