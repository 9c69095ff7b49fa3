#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace itershadow {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Largest ground set supported by the 64-bit set representation.
inline constexpr int kMaxGround = 64;

/// C(n, k) as an exact 64-bit integer. Throws CapacityError on overflow;
/// returns 0 for k < 0 or k > n.
std::uint64_t binom(int n, int k);

/// C(n, k) as an arbitrary-precision integer.
BigInt binom_big(int n, int k);

/// Overflow-checked helpers used where counts multiply.
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);

double to_double(const Rational& q);

/// "p/q" with q > 0; integers print without a denominator.
std::string to_fraction_string(const Rational& q);

/// Parses "p/q", an integer, or a finite decimal such as "0.125" exactly.
Rational parse_rational(const std::string& text);

}  // namespace itershadow
