#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace otterbench {

// Arbitrary-precision integer used for hops, exponents and productivity.
using BigInt = mpz_class;

inline std::string to_decimal(const BigInt& value) { return value.get_str(10); }

// Throws std::invalid_argument on anything other than an optionally signed
// run of decimal digits.
BigInt parse_decimal(std::string_view text);

inline BigInt from_u64(std::uint64_t value) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(value), 0, 0, &value);
  return out;
}

// Saturates at UINT64_MAX for values that do not fit; negative values give 0.
std::uint64_t saturating_u64(const BigInt& value);

// Number of decimal digits of |value| (1 for zero).
std::size_t decimal_digits(const BigInt& value);

}  // namespace otterbench
