#pragma once

#include "vendsim/kernel.hpp"
#include "vendsim/stimulus.hpp"

#include <string>
#include <vector>

namespace vendsim {

struct ExpectationFailure {
    std::uint64_t cycle = 0;
    std::string port;
    Value expected = 0;
    Value actual = 0;

    bool operator==(const ExpectationFailure&) const = default;
};

std::string describe(const ExpectationFailure& f);

struct RunResult {
    Trace trace;
    std::vector<ExpectationFailure> failures;

    bool passed() const { return failures.empty(); }
};

/// Drives `machine` from reset through the scheduled stimulus.
///
/// The trace holds one record per programmed cycle followed by a settled record
/// for the final configuration, so a zero-length run yields just the initial
/// record. Every failing expectation is reported.
[[nodiscard]] RunResult run(const MachineDefinition& machine, const StimulusProgram& stimulus);

} // namespace vendsim
