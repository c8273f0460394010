#pragma once

#include <cstdint>
#include <string>

namespace vendsim {

using Value = std::uint64_t;
using StateId = std::uint32_t;

enum class Direction { input, output, inout };

const char* to_string(Direction d);

constexpr unsigned kMaxWidth = 64;

// Largest value representable in `width` bits.
constexpr Value max_value(unsigned width) {
    return width >= 64 ? ~Value{0} : (Value{1} << width) - 1;
}

constexpr bool fits(Value v, unsigned width) { return v <= max_value(width); }

// Smallest register width able to encode `count` distinct codes (0 for count <= 1).
unsigned bits_for(std::uint64_t count);

struct PortDecl {
    std::string name;
    unsigned width = 1;
    Direction direction = Direction::input;

    // inout ports are driven by the machine; only pure inputs are sampled.
    bool sampled() const { return direction == Direction::input; }
};

class SignalValue {
public:
    // Throws WidthError if `value` does not fit.
    SignalValue(Value value, unsigned width);

    Value value() const { return value_; }
    unsigned width() const { return width_; }

    // Binary digits without leading zeros ("0" for zero).
    std::string binary() const;

    bool operator==(const SignalValue&) const = default;

private:
    Value value_;
    unsigned width_;
};

} // namespace vendsim
