#include "vendsim/signal.hpp"

#include "vendsim/errors.hpp"

#include <bit>

namespace vendsim {

const char* to_string(Direction d) {
    switch (d) {
    case Direction::input:
        return "input";
    case Direction::output:
        return "output";
    case Direction::inout:
        return "inout";
    }
    return "?";
}

unsigned bits_for(std::uint64_t count) {
    if (count <= 1)
        return 0;
    return static_cast<unsigned>(std::bit_width(count - 1));
}

SignalValue::SignalValue(Value value, unsigned width) : value_(value), width_(width) {
    if (width == 0 || width > kMaxWidth)
        throw WidthError("signal width " + std::to_string(width) + " outside 1..64");
    if (!fits(value, width))
        throw WidthError("value " + std::to_string(value) + " exceeds " + std::to_string(width) +
                         "-bit range");
}

std::string SignalValue::binary() const {
    if (value_ == 0)
        return "0";
    std::string out;
    for (int bit = static_cast<int>(std::bit_width(value_)) - 1; bit >= 0; --bit)
        out.push_back(((value_ >> bit) & 1) ? '1' : '0');
    return out;
}

} // namespace vendsim
