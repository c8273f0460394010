#include "vendsim/controller.hpp"

#include "vendsim/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace vendsim::vending {

namespace {

constexpr std::size_t kPhasesPerProduct = 5;

bool valid_identifier(std::string_view s) {
    if (s.empty())
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_';
    });
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

Value saturating_add(Value a, Value b) { return std::min<Value>(a + b, kMoneyMax); }

} // namespace

// ---------------------------------------------------------------------------
// Catalog and configuration

ProductCatalog::ProductCatalog(std::vector<Product> products) : products_(std::move(products)) {}

ProductCatalog ProductCatalog::standard() {
    return ProductCatalog({{"snacks", 30}, {"coffee", 40}, {"cold_drink", 40}, {"candies", 30}});
}

std::optional<std::size_t> ProductCatalog::find(std::string_view name) const {
    for (std::size_t i = 0; i < products_.size(); ++i)
        if (products_[i].name == name)
            return i;
    return std::nullopt;
}

std::size_t ProductCatalog::index_of(std::string_view name) const {
    if (auto i = find(name))
        return *i;
    throw CatalogError("unknown product '" + std::string(name) + "'");
}

void ProductCatalog::validate() const {
    if (products_.empty())
        throw ConfigError("product catalog is empty");
    for (std::size_t i = 0; i < products_.size(); ++i) {
        const auto& p = products_[i];
        if (!valid_identifier(p.name))
            throw ConfigError("invalid product name '" + p.name + "'");
        if (find(p.name) != i)
            throw ConfigError("duplicate product '" + p.name + "'");
        if (p.price > kMoneyMax)
            throw WidthError("price of " + p.name + " (" + std::to_string(p.price) +
                             ") exceeds the 7-bit money range");
        if (p.price == 0 || p.price % kSmallNote != 0)
            throw ConfigError("price of " + p.name + " (" + std::to_string(p.price) +
                              ") is not a positive multiple of 10; the threshold would be "
                              "unreachable with 10/20 notes");
    }
}

ControllerConfig parse_config(std::string_view text) {
    ControllerConfig config;
    std::vector<Product> products;
    bool capacity_seen = false;

    auto number = [](std::string_view v, std::size_t line) {
        unsigned long long n = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
        if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size())
            throw ConfigError("line " + std::to_string(line) + ": expected a number, got '" +
                              std::string(v) + "'");
        return n;
    };

    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));

        if (key == "inventory.capacity") {
            if (capacity_seen)
                throw ConfigError("line " + std::to_string(line_no) + ": duplicate capacity");
            auto n = number(value, line_no);
            if (n < 1 || n > 1'000'000)
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": capacity must be at least 1");
            config.capacity = static_cast<unsigned>(n);
            capacity_seen = true;
        } else if (key.starts_with("product.") && key.ends_with(".price") &&
                   key.size() > std::string_view("product..price").size()) {
            auto name = key.substr(8, key.size() - 8 - 6);
            if (std::any_of(products.begin(), products.end(),
                            [&](const Product& p) { return p.name == name; }))
                throw ConfigError("line " + std::to_string(line_no) + ": duplicate product '" +
                                  std::string(name) + "'");
            products.push_back({std::string(name), number(value, line_no)});
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                              std::string(key) + "'");
        }
    }

    if (!products.empty())
        config.catalog = ProductCatalog(std::move(products));
    config.catalog.validate();
    return config;
}

ControllerConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

Inventory Inventory::full(std::size_t products, Value capacity) {
    return Inventory{std::vector<Value>(products, capacity), capacity};
}

bool availability(const Inventory& inventory, std::size_t product) {
    return inventory.counts.at(product) > 0;
}

// ---------------------------------------------------------------------------
// Typed step

const char* to_string(Phase p) {
    switch (p) {
    case Phase::initialize:
        return "initialize";
    case Phase::select:
        return "select";
    case Phase::waiting:
        return "waiting";
    case Phase::state1:
        return "state1";
    case Phase::state2:
        return "state2";
    case Phase::vend:
        return "vend";
    case Phase::service:
        return "service";
    case Phase::cancel:
        return "cancel";
    }
    return "?";
}

bool product_indexed(Phase p) {
    return p == Phase::select || p == Phase::waiting || p == Phase::state1 ||
           p == Phase::state2 || p == Phase::vend;
}

Accumulation accumulate(Value money_count, Value note) {
    if (money_count + note > kMoneyMax)
        return {money_count, note};
    return {money_count + note, 0};
}

Value compute_change(Value money_count, Value price) {
    if (money_count < price)
        throw ContractError("change requested with " + std::to_string(money_count) +
                            " inserted for a price of " + std::to_string(price));
    return money_count - price;
}

namespace {

std::optional<std::size_t> one_hot(const std::vector<bool>& select) {
    std::optional<std::size_t> hot;
    for (std::size_t i = 0; i < select.size(); ++i) {
        if (!select[i])
            continue;
        if (hot)
            return std::nullopt;
        hot = i;
    }
    return hot;
}

ControllerStep step_from(const ProductCatalog& catalog, const ControllerState& state,
                         const ControllerRegisters& regs, const ControllerInputs& in) {
    ControllerStep r{state, regs, {}};
    auto& next = r.registers;
    auto& out = r.outputs;
    const Value note = in.note_value();
    out.money = regs.money;
    out.return_out = note;

    switch (state.phase) {
    case Phase::initialize:
        next.money_count = 0;
        if (auto p = one_hot(in.select))
            r.state = {Phase::select, *p};
        break;

    case Phase::select:
        r.state = {availability(regs.inventory, state.product) ? Phase::waiting : Phase::service,
                   state.product};
        break;

    case Phase::waiting:
        if (in.cancel) {
            r.state = {Phase::cancel, 0};
        } else if (in.rs_10 != in.rs_20) {
            auto acc = accumulate(regs.money_count, note);
            next.money_count = acc.money_count;
            out.return_out = acc.rejected;
            r.state = {in.rs_10 ? Phase::state1 : Phase::state2, state.product};
        }
        break;

    case Phase::state1:
    case Phase::state2:
        if (in.cancel)
            r.state = {Phase::cancel, 0};
        else if (regs.money_count >= catalog[state.product].price)
            r.state = {Phase::vend, state.product};
        else
            r.state = {Phase::waiting, state.product};
        break;

    case Phase::vend: {
        const Value price = catalog[state.product].price;
        out.product = true;
        out.change = compute_change(regs.money_count, price);
        next.inventory.counts.at(state.product) -= 1;
        next.money = saturating_add(regs.money, price);
        next.money_count = 0;
        r.state = {Phase::initialize, 0};
        break;
    }

    case Phase::cancel:
        // A note arriving during the refund is queued and refunded next cycle.
        out.return_out = regs.money_count;
        next.money_count = note;
        r.state = note != 0 ? ControllerState{Phase::cancel, 0} : ControllerState{};
        break;

    case Phase::service:
        out.service_request = true;
        if (in.serviced) {
            std::fill(next.inventory.counts.begin(), next.inventory.counts.end(),
                      regs.inventory.capacity);
            r.state = {};
        }
        break;
    }
    return r;
}

} // namespace

ControllerStep controller_step(const ProductCatalog& catalog, const ControllerState& state,
                               const ControllerRegisters& registers,
                               const ControllerInputs& inputs) {
    if (inputs.select.size() != catalog.size())
        throw ContractError("select vector does not match catalog size");
    if (product_indexed(state.phase) && state.product >= catalog.size())
        throw ContractError("state refers to an unknown product");

    if (inputs.reset) {
        ControllerRegisters cleared = registers;
        cleared.money_count = 0;
        cleared.money = 0;
        ControllerStep r = step_from(catalog, ControllerState{}, cleared, inputs);
        r.state = {};
        r.registers = cleared;
        return r;
    }
    return step_from(catalog, state, registers, inputs);
}

// ---------------------------------------------------------------------------
// State numbering

std::size_t controller_state_count(std::size_t products) {
    return 1 + kPhasesPerProduct * products + 2;
}

StateId state_id(const ControllerState& s, std::size_t products) {
    const auto base = [&](std::size_t offset) {
        if (s.product >= products)
            throw ContractError("state refers to an unknown product");
        return static_cast<StateId>(1 + kPhasesPerProduct * s.product + offset);
    };
    switch (s.phase) {
    case Phase::initialize:
        return 0;
    case Phase::select:
        return base(0);
    case Phase::waiting:
        return base(1);
    case Phase::state1:
        return base(2);
    case Phase::state2:
        return base(3);
    case Phase::vend:
        return base(4);
    case Phase::service:
        return static_cast<StateId>(1 + kPhasesPerProduct * products);
    case Phase::cancel:
        return static_cast<StateId>(2 + kPhasesPerProduct * products);
    }
    throw ContractError("bad phase");
}

ControllerState decode_state(StateId id, std::size_t products) {
    if (id >= controller_state_count(products))
        throw ContractError("state id " + std::to_string(id) + " out of range");
    if (id == 0)
        return {};
    const std::size_t k = id - 1;
    if (k == kPhasesPerProduct * products)
        return {Phase::service, 0};
    if (k == kPhasesPerProduct * products + 1)
        return {Phase::cancel, 0};
    static constexpr Phase order[] = {Phase::select, Phase::waiting, Phase::state1, Phase::state2,
                                      Phase::vend};
    return {order[k % kPhasesPerProduct], k / kPhasesPerProduct};
}

std::string state_name(const ControllerState& s, const ProductCatalog& catalog) {
    if (!product_indexed(s.phase))
        return to_string(s.phase);
    return std::string(to_string(s.phase)) + "_" + catalog[s.product].name;
}

// ---------------------------------------------------------------------------
// Layout and conversions

ControllerLayout::ControllerLayout(std::size_t n)
    : products(n), cancel(1 + n), rs_10(2 + n), rs_20(3 + n), serviced(4 + n),
      input_count(5 + n) {}

std::vector<Value> encode_inputs(const ControllerInputs& in, std::size_t products) {
    const ControllerLayout l(products);
    if (in.select.size() != products)
        throw ContractError("select vector does not match catalog size");
    std::vector<Value> v(l.input_count, 0);
    v[l.reset] = in.reset;
    for (std::size_t i = 0; i < products; ++i)
        v[l.select(i)] = in.select[i];
    v[l.cancel] = in.cancel;
    v[l.rs_10] = in.rs_10;
    v[l.rs_20] = in.rs_20;
    v[l.serviced] = in.serviced;
    return v;
}

ControllerInputs decode_inputs(std::span<const Value> v, std::size_t products) {
    const ControllerLayout l(products);
    if (v.size() != l.input_count)
        throw ContractError("input vector does not match controller layout");
    ControllerInputs in;
    in.reset = v[l.reset] != 0;
    for (std::size_t i = 0; i < products; ++i)
        in.select.push_back(v[l.select(i)] != 0);
    in.cancel = v[l.cancel] != 0;
    in.rs_10 = v[l.rs_10] != 0;
    in.rs_20 = v[l.rs_20] != 0;
    in.serviced = v[l.serviced] != 0;
    return in;
}

ControllerOutputs decode_outputs(std::span<const Value> v) {
    const ControllerLayout l(0);
    if (v.size() != 5)
        throw ContractError("output vector does not match controller layout");
    return {v[l.product_out] != 0, v[l.change], v[l.return_out], v[l.money],
            v[l.service_request] != 0};
}

Configuration encode_configuration(const ControllerState& state, const ControllerRegisters& regs) {
    const std::size_t n = regs.inventory.counts.size();
    Configuration c;
    c.state = state_id(state, n);
    c.registers = {regs.money_count, regs.money};
    c.registers.insert(c.registers.end(), regs.inventory.counts.begin(),
                       regs.inventory.counts.end());
    return c;
}

ControllerRegisters decode_registers(std::span<const Value> v, std::size_t products,
                                     Value capacity) {
    const ControllerLayout l(products);
    if (v.size() != 2 + products)
        throw ContractError("register vector does not match controller layout");
    ControllerRegisters r;
    r.money_count = v[l.money_count_reg];
    r.money = v[l.money_total_reg];
    r.inventory.capacity = capacity;
    for (std::size_t i = 0; i < products; ++i)
        r.inventory.counts.push_back(v[l.count_reg(i)]);
    return r;
}

// ---------------------------------------------------------------------------
// Case table

MachineDefinition build_controller(const ProductCatalog& catalog, unsigned capacity) {
    catalog.validate();
    if (capacity < 1)
        throw ConfigError("inventory capacity must be at least 1");

    const std::size_t n = catalog.size();
    const ControllerLayout l(n);
    MachineBuilder b("vending", MachineKind::mealy);

    b.add_reset("reset");
    for (std::size_t i = 0; i < n; ++i)
        b.add_input("sel" + std::to_string(i + 1));
    b.add_input("cancel");
    b.add_input("rs_10");
    b.add_input("rs_20");
    b.add_input("serviced");

    b.add_output("money", kMoneyWidth, Direction::inout);
    b.add_output("product");
    b.add_output("change", kMoneyWidth);
    b.add_output("return", kMoneyWidth);
    b.add_output("service_request");

    const unsigned count_width = std::max(1u, bits_for(Value{capacity} + 1));
    b.add_register({"money_count", kMoneyWidth, 0, false});
    b.add_register({"money_total", kMoneyWidth, 0, false});
    for (std::size_t i = 0; i < n; ++i)
        b.add_register({"count_" + catalog[i].name, count_width, capacity, true});

    for (StateId s = 0; s < controller_state_count(n); ++s)
        b.add_state(state_name(decode_state(s, n), catalog));
    b.set_initial(0);

    auto id = [n](Phase phase, std::size_t p = 0) { return state_id({phase, p}, n); };
    auto note = [l](const Evaluation& ev) {
        return (ev.input(l.rs_10) ? kSmallNote : 0) + (ev.input(l.rs_20) ? kLargeNote : 0);
    };
    // Every state reports the billing total and echoes notes it does not consume.
    auto common = [l, note](Evaluation& ev) {
        ev.set_output(l.money, ev.reg(l.money_total_reg));
        ev.set_output(l.return_out, note(ev));
    };

    const StateId init = id(Phase::initialize);
    b.on_state(init, [l, common](Evaluation& ev) {
        common(ev);
        ev.set_reg(l.money_count_reg, 0);
    });
    for (std::size_t p = 0; p < n; ++p) {
        Guard one_hot_select;
        for (std::size_t q = 0; q < n; ++q)
            one_hot_select.cube.push_back(q == p ? on(l.select(q)) : off(l.select(q)));
        b.when(init, std::move(one_hot_select), id(Phase::select, p));
    }
    b.otherwise(init, init);

    for (std::size_t p = 0; p < n; ++p) {
        const Value price = catalog[p].price;
        const StateId select = id(Phase::select, p);
        const StateId waiting = id(Phase::waiting, p);
        const StateId state1 = id(Phase::state1, p);
        const StateId state2 = id(Phase::state2, p);
        const StateId vend = id(Phase::vend, p);
        const std::size_t count = l.count_reg(p);

        b.on_state(select, common);
        b.when(select,
               {{},
                Condition{"count_" + catalog[p].name + " > 0",
                          [count](const Configuration& c) { return c.registers[count] > 0; }}},
               waiting);
        b.otherwise(select, id(Phase::service));

        auto insert = [l](Value value) {
            return [l, value](Evaluation& ev) {
                auto acc = accumulate(ev.reg(l.money_count_reg), value);
                ev.set_reg(l.money_count_reg, acc.money_count);
                ev.set_output(l.return_out, acc.rejected);
            };
        };
        b.on_state(waiting, common);
        b.when(waiting, {{on(l.cancel)}, {}}, id(Phase::cancel));
        b.when(waiting, {{on(l.rs_10), off(l.rs_20)}, {}}, state1, insert(kSmallNote));
        b.when(waiting, {{off(l.rs_10), on(l.rs_20)}, {}}, state2, insert(kLargeNote));
        b.otherwise(waiting, waiting);

        const Condition paid{"money_count >= " + std::to_string(price),
                             [l, price](const Configuration& c) {
                                 return c.registers[l.money_count_reg] >= price;
                             }};
        for (StateId counting : {state1, state2}) {
            b.on_state(counting, common);
            b.when(counting, {{on(l.cancel)}, {}}, id(Phase::cancel));
            b.when(counting, {{}, paid}, vend);
            b.otherwise(counting, waiting);
        }

        b.on_state(vend, [l, common, price, count](Evaluation& ev) {
            common(ev);
            ev.set_output(l.product_out, 1);
            ev.set_output(l.change, compute_change(ev.reg(l.money_count_reg), price));
            ev.set_reg(count, ev.reg(count) - 1);
            ev.set_reg(l.money_total_reg, saturating_add(ev.reg(l.money_total_reg), price));
            ev.set_reg(l.money_count_reg, 0);
        });
        b.otherwise(vend, init);
    }

    const StateId service = id(Phase::service);
    b.on_state(service, [l, common](Evaluation& ev) {
        common(ev);
        ev.set_output(l.service_request, 1);
    });
    b.when(service, {{on(l.serviced)}, {}}, init, [l, n, capacity](Evaluation& ev) {
        for (std::size_t p = 0; p < n; ++p)
            ev.set_reg(l.count_reg(p), capacity);
    });
    b.otherwise(service, service);

    const StateId cancel = id(Phase::cancel);
    b.on_state(cancel, [l, note](Evaluation& ev) {
        ev.set_output(l.money, ev.reg(l.money_total_reg));
        ev.set_output(l.return_out, ev.reg(l.money_count_reg));
        ev.set_reg(l.money_count_reg, note(ev));
    });
    b.when(cancel, {{on(l.rs_10)}, {}}, cancel);
    b.when(cancel, {{on(l.rs_20)}, {}}, cancel);
    b.otherwise(cancel, init);

    return std::move(b).build();
}

} // namespace vendsim::vending
