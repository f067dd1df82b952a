#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace symext {

using BigInt = boost::multiprecision::cpp_int;

/// log2 of a positive integer, accurate to double precision even when the
/// value itself does not fit in a double.
double log2_big(const BigInt& value);

BigInt pow_big(std::uint64_t base, std::uint64_t exponent);

inline std::string to_string(const BigInt& value) { return value.str(); }

}  // namespace symext
