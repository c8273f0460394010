#include "vendsim/billing.hpp"
#include "vendsim/errors.hpp"
#include "vendsim/simulate.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace vendsim;
using namespace vendsim::billing;

TEST_CASE("record_dispense accumulates catalog prices") {
    BillLedger ledger(vending::ProductCatalog::standard());
    CHECK(ledger.total() == 0);
    ledger.record_dispense("snacks");
    CHECK(ledger.total() == 30);
    ledger.record_dispense("coffee");
    CHECK(ledger.total() == 70);
    CHECK_THROWS_AS(ledger.record_dispense("caviar"), CatalogError);
    CHECK_THROWS_AS(ledger.record_dispense(std::size_t{9}), CatalogError);
}

TEST_CASE("render_bill") {
    const auto catalog = vending::ProductCatalog::standard();
    SUBCASE("two snacks") {
        BillLedger ledger(catalog);
        ledger.record_dispense("snacks");
        ledger.record_dispense("snacks");
        const auto bill = render_bill(ledger);
        REQUIRE(bill.items.size() == 1);
        CHECK(bill.items[0] == LineItem{"snacks", 30, 2, 60});
        CHECK(bill.total == 60);
    }
    SUBCASE("empty") {
        const auto bill = render_bill(BillLedger(catalog));
        CHECK(bill.items.empty());
        CHECK(bill.total == 0);
        CHECK(bill.currency == "INR");
    }
    SUBCASE("snacks and candies, in catalog order") {
        BillLedger ledger(catalog);
        ledger.record_dispense("candies");
        ledger.record_dispense("snacks");
        const auto bill = render_bill(ledger);
        REQUIRE(bill.items.size() == 2);
        CHECK(bill.items[0].name == "snacks");
        CHECK(bill.items[1].name == "candies");
        CHECK(bill.total == 60);
    }
}

TEST_CASE("unit prices are frozen once billing starts") {
    BillLedger ledger(vending::ProductCatalog::standard());
    ledger.set_unit_price("coffee", 50);
    ledger.record_dispense("coffee");
    CHECK(ledger.total() == 50);
    CHECK_THROWS_AS(ledger.set_unit_price("coffee", 60), CatalogError);
}

TEST_CASE("bill serialization") {
    BillLedger ledger(vending::ProductCatalog::standard());
    ledger.record_dispense("snacks");
    ledger.record_dispense("cold_drink");
    ledger.record_dispense("snacks");
    const auto bill = render_bill(ledger);

    const std::string expected_json = R"({
  "currency": "INR",
  "items": [
    {
      "name": "snacks",
      "unit_price": 30,
      "quantity": 2,
      "subtotal": 60
    },
    {
      "name": "cold_drink",
      "unit_price": 40,
      "quantity": 1,
      "subtotal": 40
    }
  ],
  "total": 100
}
)";
    CHECK(to_json(bill) == expected_json);
    CHECK(bill_from_json(to_json(bill)) == bill);
    CHECK_THROWS_AS(bill_from_json("{\"currency\": 3}"), ParseError);

    const std::string text = to_text(bill);
    CHECK(text ==
          "snacks         30 x   2 =     60\n"
          "cold_drink     40 x   1 =     40\n"
          "TOTAL                        100 INR\n");
}

TEST_CASE("ledger from trace agrees with product pulses, conservation and money register") {
    const auto catalog = vending::ProductCatalog::standard();
    const auto m = vending::build_controller(catalog);
    const vending::ControllerLayout l(catalog.size());
    std::mt19937 rng(3);
    std::discrete_distribution<int> pick({1, 1, 1, 1, 3, 3, 1, 3}); // sel1..4 rs10 rs20 cancel idle
    for (int trial = 0; trial < 50; ++trial) {
        auto k = start(m);
        Value inserted = 0;
        for (int c = 0; c < 400; ++c) {
            auto in = m.zero_inputs();
            const int sym = pick(rng);
            if (sym < 4)
                in[l.select(sym)] = 1;
            else if (sym == 4)
                in[l.rs_10] = 1, inserted += 10;
            else if (sym == 5)
                in[l.rs_20] = 1, inserted += 20;
            else if (sym == 6)
                in[l.cancel] = 1;
            step(m, k, in);
        }
        settle(m, k, m.zero_inputs());
        const auto ledger = ledger_from_trace(k.trace, catalog);

        std::vector<std::uint64_t> pulses(catalog.size(), 0);
        Value change = 0, returned = 0;
        for (const auto& rec : k.trace.clocked()) {
            const auto out = vending::decode_outputs(rec.outputs);
            if (out.product)
                ++pulses[vending::decode_state(rec.state, catalog.size()).product];
            change += out.change;
            returned += out.return_out;
        }
        for (std::size_t p = 0; p < catalog.size(); ++p)
            CHECK(ledger.quantity(p) == pulses[p]);
        const Value final_count = k.current.registers[l.money_count_reg];
        CHECK(ledger.total() == inserted - change - returned - final_count);
        if (ledger.total() <= 127)
            CHECK(k.current.registers[l.money_total_reg] == ledger.total());
        else
            CHECK(k.current.registers[l.money_total_reg] == 127);
    }
}
