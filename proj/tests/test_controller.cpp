#include "support/alphabet.hpp"

#include "vendsim/controller.hpp"
#include "vendsim/errors.hpp"
#include "vendsim/kernel.hpp"

#include <doctest.h>

#include <functional>

using namespace vendsim;
using namespace vendsim::vending;

namespace {

ControllerInputs inputs_for(std::size_t products) {
    ControllerInputs in;
    in.select.assign(products, false);
    return in;
}

ControllerRegisters fresh(std::size_t products, Value capacity = 4) {
    return {0, 0, Inventory::full(products, capacity)};
}

// All note sequences (10/20) whose running sum first reaches `price` on the last note.
void note_sequences(Value price, std::vector<Value>& prefix, Value sum,
                    const std::function<void(const std::vector<Value>&)>& visit) {
    for (Value note : {Value{10}, Value{20}}) {
        prefix.push_back(note);
        if (sum + note >= price)
            visit(prefix);
        else
            note_sequences(price, prefix, sum + note, visit);
        prefix.pop_back();
    }
}

} // namespace

TEST_CASE("catalog validation") {
    CHECK_NOTHROW(ProductCatalog::standard().validate());
    CHECK_THROWS_AS(build_controller(ProductCatalog({{"odd", 35}})), ConfigError);
    CHECK_THROWS_AS(build_controller(ProductCatalog({{"pricey", 130}})), WidthError);
    CHECK_THROWS_AS(build_controller(ProductCatalog({{"free", 0}})), ConfigError);
    CHECK_THROWS_AS(build_controller(ProductCatalog{}), ConfigError);
    CHECK_THROWS_AS(build_controller(ProductCatalog({{"a", 30}, {"a", 40}})), ConfigError);
    CHECK_THROWS_AS(build_controller(ProductCatalog::standard(), 0), ConfigError);
}

TEST_CASE("constructed state counts") {
    // Enumerate the states of the built graph rather than trusting the formula.
    const auto full = build_controller(ProductCatalog::standard(), 4);
    CHECK(full.state_count() == 23);
    const auto single = build_controller(ProductCatalog({{"snacks", 30}}), 4);
    CHECK(single.state_count() == 8);
    for (StateId s = 0; s < full.state_count(); ++s)
        CHECK(state_id(decode_state(s, 4), 4) == s);
}

TEST_CASE("ports follow the controller signal table") {
    const auto m = build_controller(ProductCatalog::standard());
    std::vector<std::string> in, out;
    for (const auto& p : m.inputs())
        in.push_back(p.name);
    for (const auto& p : m.outputs())
        out.push_back(p.name);
    CHECK(in == std::vector<std::string>{"reset", "sel1", "sel2", "sel3", "sel4", "cancel",
                                         "rs_10", "rs_20", "serviced"});
    CHECK(out ==
          std::vector<std::string>{"money", "product", "change", "return", "service_request"});
    CHECK(m.outputs()[0].direction == Direction::inout);
    for (auto name : {"money", "change", "return"})
        CHECK(m.outputs()[*m.find_output(name)].width == 7);
    CHECK(m.io_width() == 32);
}

TEST_CASE("accumulate") {
    CHECK(accumulate(0, 10).money_count == 10);
    CHECK(accumulate(0, 20).money_count == 20);
    CHECK(accumulate(0, 20).rejected == 0);
    const auto overflow = accumulate(120, 20);
    CHECK(overflow.money_count == 120);
    CHECK(overflow.rejected == 20);
    CHECK(accumulate(117, 10).money_count == 127);
}

TEST_CASE("compute_change") {
    CHECK(compute_change(30, 30) == 0);
    CHECK(compute_change(40, 30) == 10);
    CHECK(compute_change(50, 40) == 10);
    CHECK_THROWS_AS(compute_change(20, 30), ContractError);
}

TEST_CASE("availability") {
    Inventory inv{{4, 0, 1, 2}, 4};
    CHECK(availability(inv, 0));
    CHECK_FALSE(availability(inv, 1));
    CHECK(availability(inv, 2));
}

TEST_CASE("controller_step examples") {
    const auto catalog = ProductCatalog::standard();
    const std::size_t n = catalog.size();

    SUBCASE("waiting + 10 note") {
        auto in = inputs_for(n);
        in.rs_10 = true;
        const auto r = controller_step(catalog, {Phase::waiting, 0}, fresh(n), in);
        CHECK(r.state == ControllerState{Phase::state1, 0});
        CHECK(r.registers.money_count == 10);
        CHECK_FALSE(r.outputs.product);
    }
    SUBCASE("state2 with 30 collected vends snacks with no change") {
        auto regs = fresh(n);
        auto in = inputs_for(n);
        in.rs_20 = true;
        regs.money_count = 10;
        auto r = controller_step(catalog, {Phase::waiting, 0}, regs, in);
        CHECK(r.state == ControllerState{Phase::state2, 0});
        CHECK(r.registers.money_count == 30);
        CHECK_FALSE(r.outputs.product); // no dispense while accumulating
        r = controller_step(catalog, r.state, r.registers, inputs_for(n));
        CHECK(r.state == ControllerState{Phase::vend, 0});
        CHECK_FALSE(r.outputs.product);
        r = controller_step(catalog, r.state, r.registers, inputs_for(n));
        CHECK(r.outputs.product);
        CHECK(r.outputs.change == 0);
        CHECK(r.state == ControllerState{});
        CHECK(r.registers.inventory.counts[0] == 3);
        CHECK(r.registers.money == 30);
        CHECK(r.registers.money_count == 0);
    }
    SUBCASE("cancel from waiting refunds the held amount") {
        auto regs = fresh(n);
        regs.money_count = 20;
        auto in = inputs_for(n);
        in.cancel = true;
        auto r = controller_step(catalog, {Phase::waiting, 1}, regs, in);
        CHECK(r.state == ControllerState{Phase::cancel, 0});
        r = controller_step(catalog, r.state, r.registers, inputs_for(n));
        CHECK(r.outputs.return_out == 20);
        CHECK(r.state == ControllerState{});
        CHECK(r.registers.money_count == 0);
    }
    SUBCASE("empty stock leads to service") {
        auto regs = fresh(n);
        regs.inventory.counts[0] = 0;
        auto in = inputs_for(n);
        in.select[0] = true;
        auto r = controller_step(catalog, {}, regs, in);
        CHECK(r.state == ControllerState{Phase::select, 0});
        r = controller_step(catalog, r.state, r.registers, inputs_for(n));
        CHECK(r.state == ControllerState{Phase::service, 0});
        r = controller_step(catalog, r.state, r.registers, inputs_for(n));
        CHECK(r.outputs.service_request);
        CHECK(r.state == ControllerState{Phase::service, 0});
        auto svc = inputs_for(n);
        svc.serviced = true;
        r = controller_step(catalog, r.state, r.registers, svc);
        CHECK(r.state == ControllerState{});
        CHECK(r.registers.inventory.counts == std::vector<Value>(n, 4));
    }
    SUBCASE("non one-hot select is ignored") {
        auto in = inputs_for(n);
        in.select[0] = in.select[2] = true;
        CHECK(controller_step(catalog, {}, fresh(n), in).state == ControllerState{});
    }
    SUBCASE("both notes at once are echoed, not counted") {
        auto in = inputs_for(n);
        in.rs_10 = in.rs_20 = true;
        const auto r = controller_step(catalog, {Phase::waiting, 0}, fresh(n), in);
        CHECK(r.state == ControllerState{Phase::waiting, 0});
        CHECK(r.registers.money_count == 0);
        CHECK(r.outputs.return_out == 30);
    }
    SUBCASE("note without a selection is echoed") {
        auto in = inputs_for(n);
        in.rs_20 = true;
        const auto r = controller_step(catalog, {}, fresh(n), in);
        CHECK(r.outputs.return_out == 20);
        CHECK(r.registers.money_count == 0);
    }
    SUBCASE("reset drops held money without refund") {
        auto regs = fresh(n);
        regs.money_count = 20;
        regs.money = 40;
        auto in = inputs_for(n);
        in.reset = true;
        const auto r = controller_step(catalog, {Phase::waiting, 2}, regs, in);
        CHECK(r.state == ControllerState{});
        CHECK(r.registers.money_count == 0);
        CHECK(r.registers.money == 0);
        CHECK(r.outputs.return_out == 0);
    }
}

TEST_CASE("change equals notes minus price for every paying note sequence") {
    const auto catalog = ProductCatalog::standard();
    const auto m = build_controller(catalog);
    const ControllerLayout l(catalog.size());
    for (std::size_t p = 0; p < catalog.size(); ++p) {
        std::vector<Value> prefix;
        std::size_t sequences = 0;
        note_sequences(catalog[p].price, prefix, 0, [&](const std::vector<Value>& notes) {
            ++sequences;
            auto k = start(m, false);
            auto in = m.zero_inputs();
            in[l.select(p)] = 1;
            step(m, k, in);             // initialize -> select
            step(m, k, m.zero_inputs()); // select -> waiting
            Value sum = 0;
            for (Value note : notes) {
                sum += note;
                auto pulse = m.zero_inputs();
                pulse[note == 10 ? l.rs_10 : l.rs_20] = 1;
                step(m, k, pulse);
                step(m, k, m.zero_inputs()); // state1/state2 threshold test
            }
            const auto out = decode_outputs(step(m, k, m.zero_inputs()));
            REQUIRE(out.product);
            CHECK(out.change == sum - catalog[p].price);
            CHECK((out.change == 0 || out.change == 10));
        });
        // Brute force over {10,20}^<=5: 5 paying sequences at price 30, 8 at price 40.
        CHECK(sequences == (catalog[p].price == 30 ? 5u : 8u));
    }
}

TEST_CASE("inventory drains to service after capacity dispenses") {
    for (unsigned capacity : {1u, 2u, 4u}) {
        const auto catalog = ProductCatalog({{"snacks", 30}, {"coffee", 40}});
        const auto m = build_controller(catalog, capacity);
        const ControllerLayout l(catalog.size());
        auto k = start(m, false);
        auto pulse = [&](std::size_t port) {
            auto in = m.zero_inputs();
            in[port] = 1;
            return decode_outputs(step(m, k, in));
        };
        auto idle = [&] { return decode_outputs(step(m, k, m.zero_inputs())); };
        for (unsigned i = 0; i < capacity; ++i) {
            pulse(l.select(1));
            idle();
            pulse(l.rs_20);
            idle();
            pulse(l.rs_20);
            idle();
            CHECK(idle().product);
            CHECK(k.current.registers[l.count_reg(1)] == capacity - 1 - i);
            CHECK(k.current.registers[l.count_reg(0)] == capacity);
        }
        pulse(l.select(1));
        idle();
        CHECK(decode_state(k.current.state, 2).phase == Phase::service);
        CHECK(idle().service_request);
    }
}

TEST_CASE("cancel reaches initialize within two cycles from every paying state") {
    const auto catalog = ProductCatalog::standard();
    const auto m = build_controller(catalog);
    const ControllerLayout l(catalog.size());
    for (std::size_t p = 0; p < catalog.size(); ++p) {
        for (Phase phase : {Phase::waiting, Phase::state1, Phase::state2}) {
            for (Value held : {Value{0}, Value{10}, Value{20}, Value{30}, Value{40}}) {
                auto k = start(m, false);
                k.current = encode_configuration({phase, p}, fresh(catalog.size()));
                k.current.registers[l.money_count_reg] = held;
                auto cancel = m.zero_inputs();
                cancel[l.cancel] = 1;
                const auto first = decode_outputs(step(m, k, cancel));
                const auto second = decode_outputs(step(m, k, cancel));
                CHECK(k.current.state == m.initial());
                CHECK(k.current.registers[l.money_count_reg] == 0);
                CHECK(first.return_out + second.return_out == held);
                CHECK_FALSE(first.product);
                CHECK_FALSE(second.product);
            }
        }
    }
}

TEST_CASE("high prices exercise the overflow-reject path") {
    const auto catalog = ProductCatalog({{"hamper", 120}});
    const auto m = build_controller(catalog);
    const ControllerLayout l(1);
    auto k = start(m, false);
    k.current = encode_configuration({Phase::waiting, 0}, fresh(1));
    k.current.registers[l.money_count_reg] = 110;
    auto in = m.zero_inputs();
    in[l.rs_20] = 1;
    const auto out = decode_outputs(step(m, k, in));
    CHECK(out.return_out == 20);
    CHECK(k.current.registers[l.money_count_reg] == 110);
}

TEST_CASE("money register saturates at 127") {
    const auto catalog = ProductCatalog({{"hamper", 120}});
    auto regs = fresh(1);
    regs.money = 100;
    regs.money_count = 120;
    const auto r = controller_step(catalog, {Phase::vend, 0}, regs, inputs_for(1));
    CHECK(r.registers.money == 127);
}

TEST_CASE("config file parsing") {
    const auto cfg = parse_config("# prices\nproduct.tea.price = 20\n"
                                  "product.biscuits.price=50\ninventory.capacity = 6\n");
    CHECK(cfg.capacity == 6);
    REQUIRE(cfg.catalog.size() == 2);
    CHECK(cfg.catalog[0] == Product{"tea", 20});
    CHECK(cfg.catalog[1] == Product{"biscuits", 50});

    const auto defaults = parse_config("inventory.capacity = 2\n");
    CHECK(defaults.catalog == ProductCatalog::standard());

    CHECK_THROWS_AS(parse_config("product.tea.price = 25\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("colour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("inventory.capacity = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("product.tea.price = x\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("product.tea.price = 20\nproduct.tea.price = 30\n"),
                    ConfigError);
}
