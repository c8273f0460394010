#pragma once

#include "vendsim/signal.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vendsim {

enum class MachineKind { mealy, moore };

const char* to_string(MachineKind k);

// Datapath register carried alongside the control state (money counters, stock levels...).
// Registers flagged retain_on_reset keep their value across a synchronous reset.
struct RegisterDecl {
    std::string name;
    unsigned width = 1;
    Value reset_value = 0;
    bool retain_on_reset = false;
};

// Full machine configuration: control state plus register file.
struct Configuration {
    StateId state = 0;
    std::vector<Value> registers;

    bool operator==(const Configuration&) const = default;
};

class MachineDefinition;

/// Scratch pad handed to state and arm actions during one evaluation.
///
/// Reads see the configuration at the start of the cycle; writes go to the
/// register values latched at the clock edge and to this cycle's outputs.
/// For Moore machines the state action may not read inputs and arm actions
/// may not drive outputs; either attempt throws KindError.
class Evaluation {
public:
    StateId state() const { return current_.state; }
    const Configuration& current() const { return current_; }

    Value input(std::size_t port) const;
    std::span<const Value> inputs() const;

    Value reg(std::size_t r) const { return current_.registers.at(r); }
    Value next_reg(std::size_t r) const { return next_registers_.at(r); }
    void set_reg(std::size_t r, Value v);

    Value output(std::size_t port) const { return outputs_.at(port); }
    void set_output(std::size_t port, Value v);

private:
    friend class MachineDefinition;
    enum class Phase { state_action, arm_action };

    Evaluation(const MachineDefinition& machine, const Configuration& current,
               std::span<const Value> inputs);

    const MachineDefinition& machine_;
    const Configuration& current_;
    std::span<const Value> inputs_;
    std::vector<Value> next_registers_;
    std::vector<Value> outputs_;
    Phase phase_ = Phase::state_action;
};

using Action = std::function<void(Evaluation&)>;

// `port == value` on a sampled input.
struct Literal {
    std::size_t port;
    Value value;
};

// Predicate over the datapath registers, with a printable label for analysis output.
struct Condition {
    std::string label;
    std::function<bool(const Configuration&)> holds;
};

// A cube over input literals, optionally qualified by a register condition.
struct Guard {
    std::vector<Literal> cube;
    std::optional<Condition> condition;
};

struct Arm {
    Guard guard;
    StateId next = 0;
    Action action;
    bool is_default = false;
};

// Case table row for one state: an action run every cycle in that state, then
// the first matching arm. The last arm is always the default.
struct StateCase {
    std::string name;
    Action action;
    std::vector<Arm> arms;
};

struct StepResult {
    Configuration next;
    std::vector<Value> outputs;
    std::size_t arm = 0;
};

/// Immutable synchronous machine description. Build with MachineBuilder.
class MachineDefinition {
public:
    const std::string& name() const { return name_; }
    MachineKind kind() const { return kind_; }

    std::size_t state_count() const { return cases_.size(); }
    const std::string& state_name(StateId s) const;
    std::optional<StateId> find_state(std::string_view name) const;
    StateId initial() const { return initial_; }
    const StateCase& state_case(StateId s) const;

    const std::vector<PortDecl>& inputs() const { return inputs_; }
    const std::vector<PortDecl>& outputs() const { return outputs_; }
    const std::vector<RegisterDecl>& registers() const { return registers_; }
    std::optional<std::size_t> reset_port() const { return reset_port_; }

    std::optional<std::size_t> find_input(std::string_view name) const;
    std::optional<std::size_t> find_output(std::string_view name) const;
    std::optional<std::size_t> find_register(std::string_view name) const;

    Configuration initial_configuration() const;
    // Control state to initial, registers to their reset values unless retained.
    Configuration reset_configuration(const Configuration& from) const;

    std::vector<Value> zero_inputs() const { return std::vector<Value>(inputs_.size(), 0); }

    // Throws ContractError on a missing/extra assignment, WidthError on an oversized value.
    void check_inputs(std::span<const Value> inputs) const;
    void check_configuration(const Configuration& c) const;

    // One clock edge of the case table, ignoring the reset port.
    StepResult evaluate(const Configuration& current, std::span<const Value> inputs) const;
    StateId transition(const Configuration& current, std::span<const Value> inputs) const;
    std::vector<Value> output(const Configuration& current, std::span<const Value> inputs) const;

    // Moore output of `state`; runs only the state action with inputs locked out.
    std::vector<Value> state_output(const Configuration& state) const;

    // Sum of declared port widths, inputs and outputs.
    unsigned io_width() const;
    // Width of sampled inputs excluding the reset port.
    unsigned decision_input_width() const;

private:
    friend class MachineBuilder;
    MachineDefinition() = default;

    std::string name_;
    MachineKind kind_ = MachineKind::mealy;
    std::vector<PortDecl> inputs_;
    std::vector<PortDecl> outputs_;
    std::vector<RegisterDecl> registers_;
    std::optional<std::size_t> reset_port_;
    std::vector<StateCase> cases_;
    StateId initial_ = 0;
};

Literal on(std::size_t port);
Literal off(std::size_t port);

class MachineBuilder {
public:
    MachineBuilder(std::string name, MachineKind kind);

    std::size_t add_input(std::string name, unsigned width = 1);
    // Declares the synchronous, active-high reset input applied by the kernel.
    std::size_t add_reset(std::string name = "reset");
    std::size_t add_output(std::string name, unsigned width = 1,
                           Direction direction = Direction::output);
    std::size_t add_register(RegisterDecl decl);

    StateId add_state(std::string name);
    void set_initial(StateId s);
    void on_state(StateId s, Action action);

    void when(StateId from, Guard guard, StateId to, Action action = {});
    void otherwise(StateId from, StateId to, Action action = {});

    // Validates names, widths, guards and totality (every state needs a default arm).
    MachineDefinition build() &&;

private:
    void check_new_name(const std::string& name) const;

    MachineDefinition m_;
    std::vector<std::optional<Arm>> defaults_;
    bool initial_set_ = false;
};

} // namespace vendsim
