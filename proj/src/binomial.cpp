#include "itershadow/binomial.hpp"

#include <array>
#include <limits>

#include "itershadow/errors.hpp"

namespace itershadow {
namespace {

// Pascal triangle up to 66 rows; entries that overflow are marked with 0
// and reported by binom().
struct PascalTable {
  static constexpr int kRows = kMaxGround + 2;
  std::array<std::array<std::uint64_t, kRows>, kRows> value{};
  std::array<std::array<bool, kRows>, kRows> overflow{};

  PascalTable() {
    for (int n = 0; n < kRows; ++n) {
      value[n][0] = 1;
      for (int k = 1; k <= n; ++k) {
        const bool of = overflow[n - 1][k - 1] || overflow[n - 1][k];
        const std::uint64_t a = value[n - 1][k - 1];
        const std::uint64_t b = value[n - 1][k];
        if (of || a > std::numeric_limits<std::uint64_t>::max() - b) {
          overflow[n][k] = true;
        } else {
          value[n][k] = a + b;
        }
      }
    }
  }
};

const PascalTable& table() {
  static const PascalTable t;
  return t;
}

}  // namespace

std::uint64_t binom(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (n >= PascalTable::kRows) {
    throw CapacityError("binom: n=" + std::to_string(n) + " exceeds table");
  }
  const auto& t = table();
  if (t.overflow[n][k]) {
    throw CapacityError("binom: C(" + std::to_string(n) + "," + std::to_string(k) +
                        ") overflows 64 bits");
  }
  return t.value[n][k];
}

BigInt binom_big(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw CapacityError("checked_mul: 64-bit overflow");
  }
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) {
    throw CapacityError("checked_add: 64-bit overflow");
  }
  return a + b;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string to_fraction_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

// cpp_int reads a leading 0 as octal, so digits are validated and stripped here.
BigInt parse_decimal_integer(const std::string& text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  if (i == text.size()) throw InputError("missing digits in '" + text + "'");
  for (std::size_t p = i; p < text.size(); ++p)
    if (text[p] < '0' || text[p] > '9') throw InputError("bad digit in '" + text + "'");
  while (i + 1 < text.size() && text[i] == '0') ++i;
  const BigInt v(text.substr(i));
  return negative ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw InputError("empty rational");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const BigInt num = parse_decimal_integer(text.substr(0, slash));
    const BigInt den = parse_decimal_integer(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(parse_decimal_integer(text));
  std::string frac = text.substr(dot + 1);
  if (frac.empty()) throw InputError("bad decimal '" + text + "'");
  std::string whole = text.substr(0, dot);
  if (whole.empty() || whole == "-" || whole == "+") whole += "0";
  if (frac[0] == '+' || frac[0] == '-') throw InputError("bad decimal '" + text + "'");
  const bool negative = whole[0] == '-';
  BigInt scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  const BigInt w = parse_decimal_integer(whole);
  const BigInt f = parse_decimal_integer(frac);
  const BigInt magnitude = (w < 0 ? BigInt(-w) : w) * scale + f;
  return Rational(negative ? BigInt(-magnitude) : magnitude, scale);
}

}  // namespace itershadow
