#include "vendsim/billing.hpp"

#include "vendsim/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace vendsim::billing {

BillLedger::BillLedger(const vending::ProductCatalog& catalog, std::uint64_t start_cycle)
    : products_(catalog.products()), quantities_(catalog.size(), 0), start_cycle_(start_cycle) {}

void BillLedger::record_dispense(std::string_view product) {
    for (std::size_t i = 0; i < products_.size(); ++i) {
        if (products_[i].name == product) {
            ++quantities_[i];
            return;
        }
    }
    throw CatalogError("cannot bill unknown product '" + std::string(product) + "'");
}

void BillLedger::record_dispense(std::size_t product) {
    if (product >= products_.size())
        throw CatalogError("cannot bill product index " + std::to_string(product));
    ++quantities_[product];
}

void BillLedger::set_unit_price(std::string_view product, std::uint64_t price) {
    if (std::any_of(quantities_.begin(), quantities_.end(), [](auto q) { return q != 0; }))
        throw CatalogError("unit prices are fixed once the session has billed a product");
    for (auto& p : products_) {
        if (p.name == product) {
            p.price = price;
            return;
        }
    }
    throw CatalogError("unknown product '" + std::string(product) + "'");
}

std::uint64_t BillLedger::subtotal(std::size_t product) const {
    return quantities_.at(product) * products_.at(product).price;
}

std::uint64_t BillLedger::total() const {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < products_.size(); ++i)
        sum += subtotal(i);
    return sum;
}

BillDocument render_bill(const BillLedger& ledger, std::string currency) {
    BillDocument bill;
    bill.currency = std::move(currency);
    for (std::size_t i = 0; i < ledger.products().size(); ++i) {
        if (ledger.quantity(i) == 0)
            continue;
        const auto& p = ledger.products()[i];
        bill.items.push_back({p.name, p.price, ledger.quantity(i), ledger.subtotal(i)});
    }
    bill.total = std::accumulate(bill.items.begin(), bill.items.end(), std::uint64_t{0},
                                 [](std::uint64_t acc, const LineItem& li) {
                                     return acc + li.subtotal;
                                 });
    return bill;
}

std::string to_json(const BillDocument& bill) {
    nlohmann::ordered_json doc;
    doc["currency"] = bill.currency;
    doc["items"] = nlohmann::ordered_json::array();
    for (const auto& li : bill.items) {
        nlohmann::ordered_json item;
        item["name"] = li.name;
        item["unit_price"] = li.unit_price;
        item["quantity"] = li.quantity;
        item["subtotal"] = li.subtotal;
        doc["items"].push_back(std::move(item));
    }
    doc["total"] = bill.total;
    return doc.dump(2) + "\n";
}

BillDocument bill_from_json(std::string_view text) {
    try {
        auto doc = nlohmann::json::parse(text);
        BillDocument bill;
        bill.currency = doc.at("currency").get<std::string>();
        for (const auto& item : doc.at("items"))
            bill.items.push_back({item.at("name").get<std::string>(),
                                  item.at("unit_price").get<std::uint64_t>(),
                                  item.at("quantity").get<std::uint64_t>(),
                                  item.at("subtotal").get<std::uint64_t>()});
        bill.total = doc.at("total").get<std::uint64_t>();
        return bill;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, std::string("malformed bill: ") + e.what());
    }
}

std::string to_text(const BillDocument& bill) {
    std::ostringstream out;
    for (const auto& li : bill.items)
        out << std::left << std::setw(12) << li.name << std::right << std::setw(5)
            << li.unit_price << " x " << std::setw(3) << li.quantity << " = " << std::setw(6)
            << li.subtotal << '\n';
    out << std::left << std::setw(26) << "TOTAL" << std::right << std::setw(6) << bill.total
        << ' ' << bill.currency << '\n';
    return out.str();
}

BillLedger ledger_from_trace(const Trace& trace, const vending::ProductCatalog& catalog) {
    const std::size_t n = catalog.size();
    const vending::ControllerLayout layout(n);
    BillLedger ledger(catalog, trace.empty() ? 0 : trace.records.front().cycle);
    for (const auto& rec : trace.clocked()) {
        if (rec.outputs.at(layout.product_out) == 0)
            continue;
        const auto state = vending::decode_state(rec.state, n);
        if (state.phase == vending::Phase::vend)
            ledger.record_dispense(state.product);
    }
    return ledger;
}

} // namespace vendsim::billing
