#pragma once

#include "vendsim/controller.hpp"
#include "vendsim/kernel.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vendsim::billing {

struct LineItem {
    std::string name;
    std::uint64_t unit_price = 0;
    std::uint64_t quantity = 0;
    std::uint64_t subtotal = 0;

    bool operator==(const LineItem&) const = default;
};

struct BillDocument {
    std::string currency = "INR";
    std::vector<LineItem> items;
    std::uint64_t total = 0;

    bool operator==(const BillDocument&) const = default;
};

/// Per-session record of dispensed products. Unit prices are snapshotted when
/// the ledger opens, and the total is unbounded (unlike the 7-bit money port).
class BillLedger {
public:
    explicit BillLedger(const vending::ProductCatalog& catalog, std::uint64_t start_cycle = 0);

    // Throws CatalogError for a product that is not in the snapshot.
    void record_dispense(std::string_view product);
    void record_dispense(std::size_t product);

    // Price edits are only accepted before the first dispense.
    void set_unit_price(std::string_view product, std::uint64_t price);

    std::uint64_t quantity(std::size_t product) const { return quantities_.at(product); }
    std::uint64_t subtotal(std::size_t product) const;
    std::uint64_t total() const;
    std::uint64_t start_cycle() const { return start_cycle_; }
    const std::vector<vending::Product>& products() const { return products_; }

private:
    std::vector<vending::Product> products_;
    std::vector<std::uint64_t> quantities_;
    std::uint64_t start_cycle_;
};

// Line items in catalog order, omitting products with zero quantity.
BillDocument render_bill(const BillLedger& ledger, std::string currency = "INR");

// Machine-readable form: {"currency", "items": [{name, unit_price, quantity, subtotal}], "total"}.
std::string to_json(const BillDocument& bill);
BillDocument bill_from_json(std::string_view text);
// One line per item and a TOTAL line.
std::string to_text(const BillDocument& bill);

// Replays a controller trace: one dispense per clocked cycle with product=1 in vend_<p>.
BillLedger ledger_from_trace(const Trace& trace, const vending::ProductCatalog& catalog);

} // namespace vendsim::billing
