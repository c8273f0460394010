#pragma once

#include "vendsim/kernel.hpp"

#include <functional>
#include <span>
#include <vector>

namespace vendsim::test {

// Runs a Mealy machine and its Moore conversion side by side over `inputs` and
// checks the one-cycle output skew. Returns the number of mismatching cycles.
inline std::size_t skew_mismatches(const MachineDefinition& mealy, const MachineDefinition& moore,
                                   std::span<const std::vector<Value>> inputs) {
    std::size_t bad = 0;
    auto a = start(mealy, false);
    auto b = start(moore, false);
    std::vector<Value> pending = mealy.output(a.current, mealy.zero_inputs());
    for (const auto& in : inputs) {
        const auto moore_out = step(moore, b, in);
        if (moore_out != pending)
            ++bad;
        pending = step(mealy, a, in);
    }
    if (moore_output(moore, b.current) != pending)
        ++bad;
    return bad;
}

// Depth-first version over every sequence of length <= depth from `alphabet`,
// sharing prefixes. Returns the number of mismatching (sequence, cycle) points.
inline std::size_t exhaustive_skew(const MachineDefinition& mealy, const MachineDefinition& moore,
                                   const std::vector<std::vector<Value>>& alphabet, int depth) {
    std::size_t bad = 0;
    std::function<void(const KernelState&, const KernelState&, int)> walk =
        [&](const KernelState& a, const KernelState& b, int remaining) {
            if (remaining == 0)
                return;
            for (const auto& in : alphabet) {
                KernelState a2 = a, b2 = b;
                const auto mealy_out = step(mealy, a2, in);
                step(moore, b2, in);
                if (moore_output(moore, b2.current) != mealy_out)
                    ++bad;
                walk(a2, b2, remaining - 1);
            }
        };
    const auto a = start(mealy, false);
    const auto b = start(moore, false);
    if (moore_output(moore, b.current) != mealy.output(a.current, mealy.zero_inputs()))
        ++bad;
    walk(a, b, depth);
    return bad;
}

} // namespace vendsim::test
