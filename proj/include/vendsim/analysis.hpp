#pragma once

#include "vendsim/machine.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace vendsim::analysis {

// Concrete enumeration is refused above this many decision input bits.
constexpr unsigned kEnumerationCap = 20;

/// Calls `visit` with every assignment to the decision inputs (reset held at 0),
/// in increasing numeric order with the first declared input as the least
/// significant bits. Throws AnalysisError above kEnumerationCap bits.
void for_each_assignment(const MachineDefinition& machine,
                         const std::function<void(std::span<const Value>)>& visit);

struct Reachability {
    std::vector<StateId> reachable;   // canonical order
    std::vector<StateId> unreachable; // canonical order
    bool symbolic = false;            // true when computed over guard arcs

    bool contains(StateId s) const;
};

/// Breadth-first search from the initial state.
///
/// Register-free machines are explored concretely over every input assignment.
/// Machines with datapath registers are explored over their case-table arcs,
/// treating every register condition as satisfiable.
Reachability reachable_states(const MachineDefinition& machine);

// Printable guard, e.g. "rs_10 & !rs_20" or "money_count >= 30"; "else" for default arms.
std::string guard_label(const MachineDefinition& machine, const Arm& arm);

// Graphviz digraph; nodes in canonical order, edges sorted by source then guard label.
std::string to_dot(const MachineDefinition& machine);

/// Mealy to Moore conversion with a one-cycle output skew.
///
/// The Moore machine's output at cycle t+1 equals the Mealy output at cycle t;
/// its output at cycle 0 is the Mealy output at (initial, all-zero inputs).
/// Register-free machines get the classic product construction whose states are
/// the reachable (state, output) pairs. Machines with datapath registers keep
/// their control states and hold the pair's output half in output registers.
MachineDefinition mealy_to_moore(const MachineDefinition& machine);

struct ResourceReport {
    std::string machine;
    std::size_t states = 0;
    std::size_t transitions = 0; // (state, guard) arcs including default arms
    unsigned min_state_bits = 0;
    unsigned io_bits = 0;
    unsigned register_bits = 0;

    bool operator==(const ResourceReport&) const = default;
};

ResourceReport resource_report(const MachineDefinition& machine);
std::string to_json(const ResourceReport& report);

} // namespace vendsim::analysis
