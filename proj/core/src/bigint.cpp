#include "symext/bigint.hpp"

#include <cmath>

#include "symext/group.hpp"

namespace symext {

double log2_big(const BigInt& value) {
    if (value <= 0) throw Error("log2_big: value must be positive");
    const auto msb = static_cast<long>(boost::multiprecision::msb(value));
    if (msb < 53) return std::log2(value.convert_to<double>());
    const long shift = msb - 52;
    const BigInt top = value >> shift;
    return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

BigInt pow_big(std::uint64_t base, std::uint64_t exponent) {
    return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exponent));
}

}  // namespace symext
