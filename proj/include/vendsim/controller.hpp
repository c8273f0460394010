#pragma once

#include "vendsim/machine.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vendsim::vending {

// Accepted notes and the width of every money-carrying port.
constexpr Value kSmallNote = 10;
constexpr Value kLargeNote = 20;
constexpr unsigned kMoneyWidth = 7;
constexpr Value kMoneyMax = max_value(kMoneyWidth);
constexpr unsigned kDefaultCapacity = 4;

struct Product {
    std::string name;
    Value price = 0;

    bool operator==(const Product&) const = default;
};

/// Ordered product list; position i is selected by port sel<i+1>.
class ProductCatalog {
public:
    ProductCatalog() = default;
    explicit ProductCatalog(std::vector<Product> products);

    // Snacks 30, coffee 40, cold drink 40, candies 30.
    static ProductCatalog standard();

    std::size_t size() const { return products_.size(); }
    bool empty() const { return products_.empty(); }
    const Product& operator[](std::size_t i) const { return products_.at(i); }
    const std::vector<Product>& products() const { return products_; }

    std::optional<std::size_t> find(std::string_view name) const;
    // Throws CatalogError for an unknown product.
    std::size_t index_of(std::string_view name) const;

    // Throws ConfigError (empty, duplicate, bad name, price not a positive
    // multiple of 10) or WidthError (price above the 7-bit ceiling).
    void validate() const;

    bool operator==(const ProductCatalog&) const = default;

private:
    std::vector<Product> products_;
};

struct ControllerConfig {
    ProductCatalog catalog = ProductCatalog::standard();
    unsigned capacity = kDefaultCapacity;
};

// `key = value` lines: product.<name>.price, inventory.capacity. Products listed
// in a file replace the standard catalog, in file order.
ControllerConfig parse_config(std::string_view text);
ControllerConfig load_config(const std::filesystem::path& path);

struct Inventory {
    std::vector<Value> counts;
    Value capacity = kDefaultCapacity;

    static Inventory full(std::size_t products, Value capacity);
    bool operator==(const Inventory&) const = default;
};

bool availability(const Inventory& inventory, std::size_t product);

enum class Phase { initialize, select, waiting, state1, state2, vend, service, cancel };

const char* to_string(Phase p);
bool product_indexed(Phase p);

struct ControllerState {
    Phase phase = Phase::initialize;
    std::size_t product = 0; // meaningful only for product-indexed phases

    bool operator==(const ControllerState& o) const {
        return phase == o.phase && (!product_indexed(phase) || product == o.product);
    }
};

struct ControllerRegisters {
    Value money_count = 0;
    Value money = 0; // saturating total of dispensed prices
    Inventory inventory;

    bool operator==(const ControllerRegisters&) const = default;
};

struct ControllerInputs {
    bool reset = false;
    std::vector<bool> select;
    bool cancel = false;
    bool rs_10 = false;
    bool rs_20 = false;
    bool serviced = false;

    Value note_value() const { return (rs_10 ? kSmallNote : 0) + (rs_20 ? kLargeNote : 0); }
};

struct ControllerOutputs {
    bool product = false;
    Value change = 0;
    Value return_out = 0;
    Value money = 0;
    bool service_request = false;

    bool operator==(const ControllerOutputs&) const = default;
};

struct ControllerStep {
    ControllerState state;
    ControllerRegisters registers;
    ControllerOutputs outputs;
};

struct Accumulation {
    Value money_count = 0;
    Value rejected = 0; // echoed on return in the same cycle
};

// Adds a note unless the result would exceed the 7-bit ceiling.
Accumulation accumulate(Value money_count, Value note);

// ContractError when money_count < price.
Value compute_change(Value money_count, Value price);

/// The controller's next-state, register and output function for one clock edge.
///
/// A direct transcription of the state table, independent of the case table
/// built by build_controller; tests hold the two in lockstep.
ControllerStep controller_step(const ProductCatalog& catalog, const ControllerState& state,
                               const ControllerRegisters& registers,
                               const ControllerInputs& inputs);

// Canonical state numbering: initialize = 0, then for each product in catalog
// order select, waiting, state1, state2, vend; then service, cancel.
std::size_t controller_state_count(std::size_t products);
StateId state_id(const ControllerState& state, std::size_t products);
ControllerState decode_state(StateId id, std::size_t products);
std::string state_name(const ControllerState& state, const ProductCatalog& catalog);

/// Port, register and state indices of a controller built for `products` items.
struct ControllerLayout {
    explicit ControllerLayout(std::size_t products);

    std::size_t products;
    // inputs
    std::size_t reset = 0;
    std::size_t select(std::size_t product) const { return 1 + product; }
    std::size_t cancel;
    std::size_t rs_10;
    std::size_t rs_20;
    std::size_t serviced;
    std::size_t input_count;
    // outputs
    std::size_t money = 0;
    std::size_t product_out = 1;
    std::size_t change = 2;
    std::size_t return_out = 3;
    std::size_t service_request = 4;
    // registers
    std::size_t money_count_reg = 0;
    std::size_t money_total_reg = 1;
    std::size_t count_reg(std::size_t product) const { return 2 + product; }
};

MachineDefinition build_controller(const ProductCatalog& catalog,
                                   unsigned capacity = kDefaultCapacity);

// Conversions between the typed controller view and kernel assignments.
std::vector<Value> encode_inputs(const ControllerInputs& inputs, std::size_t products);
ControllerInputs decode_inputs(std::span<const Value> inputs, std::size_t products);
ControllerOutputs decode_outputs(std::span<const Value> outputs);
Configuration encode_configuration(const ControllerState& state, const ControllerRegisters& regs);
ControllerRegisters decode_registers(std::span<const Value> registers, std::size_t products,
                                     Value capacity);

} // namespace vendsim::vending
