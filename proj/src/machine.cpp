#include "vendsim/machine.hpp"

#include "vendsim/errors.hpp"

#include <algorithm>
#include <utility>

namespace vendsim {

const char* to_string(MachineKind k) { return k == MachineKind::mealy ? "mealy" : "moore"; }

namespace {

template <class Decl>
std::optional<std::size_t> find_named(const std::vector<Decl>& decls, std::string_view name) {
    for (std::size_t i = 0; i < decls.size(); ++i)
        if (decls[i].name == name)
            return i;
    return std::nullopt;
}

void check_width(const std::string& what, unsigned width) {
    if (width == 0 || width > kMaxWidth)
        throw WidthError(what + ": width " + std::to_string(width) + " outside 1..64");
}

bool matches(const Guard& g, const Configuration& current, std::span<const Value> inputs) {
    for (const auto& lit : g.cube)
        if (inputs[lit.port] != lit.value)
            return false;
    return !g.condition || g.condition->holds(current);
}

} // namespace

// ---------------------------------------------------------------------------
// Evaluation

Evaluation::Evaluation(const MachineDefinition& machine, const Configuration& current,
                       std::span<const Value> inputs)
    : machine_(machine), current_(current), inputs_(inputs),
      next_registers_(current.registers), outputs_(machine.outputs().size(), 0) {}

Value Evaluation::input(std::size_t port) const {
    if (machine_.kind() == MachineKind::moore && phase_ == Phase::state_action)
        throw KindError("Moore output logic of '" + machine_.name() + "' read input " +
                        machine_.inputs().at(port).name);
    return inputs_[port];
}

std::span<const Value> Evaluation::inputs() const {
    if (machine_.kind() == MachineKind::moore && phase_ == Phase::state_action)
        throw KindError("Moore output logic of '" + machine_.name() + "' read its inputs");
    return inputs_;
}

void Evaluation::set_reg(std::size_t r, Value v) {
    const auto& decl = machine_.registers().at(r);
    if (!fits(v, decl.width))
        throw WidthError("register " + decl.name + " cannot hold " + std::to_string(v));
    next_registers_[r] = v;
}

void Evaluation::set_output(std::size_t port, Value v) {
    const auto& decl = machine_.outputs().at(port);
    if (machine_.kind() == MachineKind::moore && phase_ == Phase::arm_action)
        throw KindError("Moore transition logic of '" + machine_.name() + "' drove output " +
                        decl.name);
    if (!fits(v, decl.width))
        throw WidthError("output " + decl.name + " cannot carry " + std::to_string(v));
    outputs_[port] = v;
}

// ---------------------------------------------------------------------------
// MachineDefinition

const std::string& MachineDefinition::state_name(StateId s) const { return state_case(s).name; }

const StateCase& MachineDefinition::state_case(StateId s) const {
    if (s >= cases_.size())
        throw ContractError("state id " + std::to_string(s) + " not declared in " + name_);
    return cases_[s];
}

std::optional<StateId> MachineDefinition::find_state(std::string_view name) const {
    auto idx = find_named(cases_, name);
    if (!idx)
        return std::nullopt;
    return static_cast<StateId>(*idx);
}

std::optional<std::size_t> MachineDefinition::find_input(std::string_view name) const {
    return find_named(inputs_, name);
}

std::optional<std::size_t> MachineDefinition::find_output(std::string_view name) const {
    return find_named(outputs_, name);
}

std::optional<std::size_t> MachineDefinition::find_register(std::string_view name) const {
    return find_named(registers_, name);
}

Configuration MachineDefinition::initial_configuration() const {
    Configuration c;
    c.state = initial_;
    c.registers.reserve(registers_.size());
    for (const auto& r : registers_)
        c.registers.push_back(r.reset_value);
    return c;
}

Configuration MachineDefinition::reset_configuration(const Configuration& from) const {
    Configuration c = initial_configuration();
    for (std::size_t i = 0; i < registers_.size(); ++i)
        if (registers_[i].retain_on_reset)
            c.registers[i] = from.registers.at(i);
    return c;
}

void MachineDefinition::check_inputs(std::span<const Value> inputs) const {
    if (inputs.size() != inputs_.size())
        throw ContractError(name_ + ": expected " + std::to_string(inputs_.size()) +
                            " input values, got " + std::to_string(inputs.size()));
    for (std::size_t i = 0; i < inputs.size(); ++i)
        if (!fits(inputs[i], inputs_[i].width))
            throw WidthError("input " + inputs_[i].name + "=" + std::to_string(inputs[i]) +
                             " exceeds " + std::to_string(inputs_[i].width) + " bits");
}

void MachineDefinition::check_configuration(const Configuration& c) const {
    if (c.state >= cases_.size())
        throw ContractError("state id " + std::to_string(c.state) + " not declared in " + name_);
    if (c.registers.size() != registers_.size())
        throw ContractError(name_ + ": register file has wrong size");
    for (std::size_t i = 0; i < registers_.size(); ++i)
        if (!fits(c.registers[i], registers_[i].width))
            throw WidthError("register " + registers_[i].name + " out of range");
}

StepResult MachineDefinition::evaluate(const Configuration& current,
                                       std::span<const Value> inputs) const {
    const StateCase& sc = state_case(current.state);
    Evaluation ev(*this, current, inputs);
    if (sc.action)
        sc.action(ev);

    ev.phase_ = Evaluation::Phase::arm_action;
    std::size_t chosen = sc.arms.size() - 1;
    for (std::size_t i = 0; i + 1 < sc.arms.size(); ++i) {
        if (matches(sc.arms[i].guard, current, inputs)) {
            chosen = i;
            break;
        }
    }
    const Arm& arm = sc.arms[chosen];
    if (arm.action)
        arm.action(ev);

    StepResult r;
    r.next.state = arm.next;
    r.next.registers = std::move(ev.next_registers_);
    r.outputs = std::move(ev.outputs_);
    r.arm = chosen;
    return r;
}

StateId MachineDefinition::transition(const Configuration& current,
                                      std::span<const Value> inputs) const {
    return evaluate(current, inputs).next.state;
}

std::vector<Value> MachineDefinition::output(const Configuration& current,
                                             std::span<const Value> inputs) const {
    return evaluate(current, inputs).outputs;
}

std::vector<Value> MachineDefinition::state_output(const Configuration& state) const {
    if (kind_ != MachineKind::moore)
        throw KindError("state_output requires a Moore machine; '" + name_ + "' is Mealy");
    check_configuration(state);
    const StateCase& sc = cases_[state.state];
    const auto no_inputs = zero_inputs();
    Evaluation ev(*this, state, no_inputs);
    if (sc.action)
        sc.action(ev);
    return std::move(ev.outputs_);
}

unsigned MachineDefinition::io_width() const {
    unsigned total = 0;
    for (const auto& p : inputs_)
        total += p.width;
    for (const auto& p : outputs_)
        total += p.width;
    return total;
}

unsigned MachineDefinition::decision_input_width() const {
    unsigned total = 0;
    for (std::size_t i = 0; i < inputs_.size(); ++i)
        if (!reset_port_ || *reset_port_ != i)
            total += inputs_[i].width;
    return total;
}

// ---------------------------------------------------------------------------
// MachineBuilder

Literal on(std::size_t port) { return {port, 1}; }
Literal off(std::size_t port) { return {port, 0}; }

MachineBuilder::MachineBuilder(std::string name, MachineKind kind) {
    m_.name_ = std::move(name);
    m_.kind_ = kind;
}

void MachineBuilder::check_new_name(const std::string& name) const {
    if (name.empty())
        throw ContractError(m_.name_ + ": empty port or register name");
    if (find_named(m_.inputs_, name) || find_named(m_.outputs_, name) ||
        find_named(m_.registers_, name))
        throw ContractError(m_.name_ + ": duplicate name '" + name + "'");
}

std::size_t MachineBuilder::add_input(std::string name, unsigned width) {
    check_new_name(name);
    check_width("input " + name, width);
    m_.inputs_.push_back({std::move(name), width, Direction::input});
    return m_.inputs_.size() - 1;
}

std::size_t MachineBuilder::add_reset(std::string name) {
    if (m_.reset_port_)
        throw ContractError(m_.name_ + ": reset already declared");
    auto idx = add_input(std::move(name), 1);
    m_.reset_port_ = idx;
    return idx;
}

std::size_t MachineBuilder::add_output(std::string name, unsigned width, Direction direction) {
    check_new_name(name);
    check_width("output " + name, width);
    if (direction == Direction::input)
        throw ContractError("output " + name + " declared with input direction");
    m_.outputs_.push_back({std::move(name), width, direction});
    return m_.outputs_.size() - 1;
}

std::size_t MachineBuilder::add_register(RegisterDecl decl) {
    check_new_name(decl.name);
    check_width("register " + decl.name, decl.width);
    if (!fits(decl.reset_value, decl.width))
        throw WidthError("register " + decl.name + " reset value does not fit");
    m_.registers_.push_back(std::move(decl));
    return m_.registers_.size() - 1;
}

StateId MachineBuilder::add_state(std::string name) {
    if (name.empty() || find_named(m_.cases_, name))
        throw ContractError(m_.name_ + ": bad or duplicate state name '" + name + "'");
    m_.cases_.push_back({std::move(name), {}, {}});
    defaults_.emplace_back();
    return static_cast<StateId>(m_.cases_.size() - 1);
}

void MachineBuilder::set_initial(StateId s) {
    m_.state_case(s);
    m_.initial_ = s;
    initial_set_ = true;
}

void MachineBuilder::on_state(StateId s, Action action) {
    m_.cases_.at(s).action = std::move(action);
}

void MachineBuilder::when(StateId from, Guard guard, StateId to, Action action) {
    m_.state_case(from);
    m_.state_case(to);
    for (const auto& lit : guard.cube) {
        if (lit.port >= m_.inputs_.size())
            throw ContractError(m_.name_ + ": guard references undeclared input");
        if (m_.reset_port_ && *m_.reset_port_ == lit.port)
            throw ContractError(m_.name_ + ": guards may not test the reset input");
        if (!fits(lit.value, m_.inputs_[lit.port].width))
            throw WidthError(m_.name_ + ": guard literal exceeds width of " +
                             m_.inputs_[lit.port].name);
    }
    if (guard.condition && !guard.condition->holds)
        throw ContractError(m_.name_ + ": condition '" + guard.condition->label + "' is empty");
    m_.cases_[from].arms.push_back({std::move(guard), to, std::move(action), false});
}

void MachineBuilder::otherwise(StateId from, StateId to, Action action) {
    m_.state_case(from);
    m_.state_case(to);
    if (defaults_[from])
        throw ContractError(m_.name_ + ": state " + m_.cases_[from].name +
                            " already has a default arm");
    defaults_[from] = Arm{{}, to, std::move(action), true};
}

MachineDefinition MachineBuilder::build() && {
    if (m_.cases_.empty())
        throw ContractError(m_.name_ + ": machine has no states");
    if (!initial_set_)
        m_.initial_ = 0;
    for (std::size_t s = 0; s < m_.cases_.size(); ++s) {
        if (!defaults_[s])
            throw ContractError(m_.name_ + ": state " + m_.cases_[s].name +
                                " has no default arm; transition function would not be total");
        m_.cases_[s].arms.push_back(std::move(*defaults_[s]));
    }
    return std::move(m_);
}

} // namespace vendsim
