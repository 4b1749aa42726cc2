#include "otterbench/bigint.h"

#include <cctype>
#include <stdexcept>

namespace otterbench {

BigInt parse_decimal(std::string_view text) {
  std::size_t start = (!text.empty() && (text[0] == '-' || text[0] == '+')) ? 1 : 0;
  if (start == text.size()) {
    throw std::invalid_argument("empty decimal integer");
  }
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw std::invalid_argument("not a decimal integer: " + std::string(text));
    }
  }
  std::string digits(text.substr(text[0] == '+' ? 1 : 0));
  return BigInt(digits, 10);
}

std::uint64_t saturating_u64(const BigInt& value) {
  if (sgn(value) <= 0) return 0;
  if (mpz_sizeinbase(value.get_mpz_t(), 2) > 64) return UINT64_MAX;
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, value.get_mpz_t());
  return out;
}

std::size_t decimal_digits(const BigInt& value) {
  if (sgn(value) == 0) return 1;
  // mpz_sizeinbase may overestimate by one for base 10.
  std::string s = BigInt(abs(value)).get_str(10);
  return s.size();
}

}  // namespace otterbench
