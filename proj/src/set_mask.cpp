#include "itershadow/set_mask.hpp"

#include <sstream>

#include "itershadow/binomial.hpp"
#include "itershadow/errors.hpp"

namespace itershadow {

std::uint64_t low_bits(int n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

SetMask::SetMask(std::uint64_t bits, int n) : bits_(bits), n_(n) {
  if (n < 0 || n > kMaxGround) throw InputError("ground set size out of range: " + std::to_string(n));
  if ((bits & ~low_bits(n)) != 0) throw InputError("set mask has bits above n=" + std::to_string(n));
}

SetMask SetMask::from_elements(int n, std::span<const int> elements) {
  std::uint64_t bits = 0;
  for (int e : elements) {
    if (e < 1 || e > n) throw InputError("element " + std::to_string(e) + " outside [1," + std::to_string(n) + "]");
    bits |= std::uint64_t{1} << (e - 1);
  }
  return SetMask(bits, n);
}

SetMask SetMask::from_elements(int n, std::initializer_list<int> elements) {
  return from_elements(n, std::span<const int>(elements.begin(), elements.size()));
}

SetMask SetMask::full(int n) { return SetMask(low_bits(n), n); }

bool SetMask::contains(int element) const {
  return element >= 1 && element <= n_ && ((bits_ >> (element - 1)) & 1U);
}

std::vector<int> SetMask::elements() const {
  std::vector<int> out;
  for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
  return out;
}

SetMask SetMask::complement() const { return SetMask(~bits_ & low_bits(n_), n_); }

SetMask SetMask::operator|(const SetMask& o) const { return SetMask(bits_ | o.bits_, std::max(n_, o.n_)); }
SetMask SetMask::operator&(const SetMask& o) const { return SetMask(bits_ & o.bits_, std::max(n_, o.n_)); }
SetMask SetMask::operator^(const SetMask& o) const { return SetMask(bits_ ^ o.bits_, std::max(n_, o.n_)); }
SetMask SetMask::minus(const SetMask& o) const { return SetMask(bits_ & ~o.bits_, n_); }

SetMask SetMask::reflected() const {
  std::uint64_t out = 0;
  for (std::uint64_t b = bits_; b; b &= b - 1) {
    const int p = std::countr_zero(b);
    out |= std::uint64_t{1} << (n_ - 1 - p);
  }
  return SetMask(out, n_);
}

std::string SetMask::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int e : elements()) {
    if (!first) os << ',';
    os << e;
    first = false;
  }
  os << '}';
  return os.str();
}

std::uint64_t colex_rank(std::uint64_t bits) {
  std::uint64_t r = 0;
  int i = 1;
  for (std::uint64_t b = bits; b; b &= b - 1, ++i) r += binom(std::countr_zero(b), i);
  return r;
}

std::uint64_t rank(const SetMask& s, int k) {
  if (s.size() != k) {
    throw InputError("rank: set " + s.to_string() + " has size " + std::to_string(s.size()) +
                     ", expected " + std::to_string(k));
  }
  return colex_rank(s.bits());
}

std::uint64_t unrank_bits(std::uint64_t r, int k) {
  std::uint64_t bits = 0;
  int c = kMaxGround - 1;
  for (int i = k; i >= 1; --i) {
    // Largest c with C(c, i) <= r; stops at c = i-1 since C(i-1, i) = 0.
    while (c >= i && binom(c, i) > r) --c;
    bits |= std::uint64_t{1} << c;
    r -= binom(c, i);
    --c;
  }
  return bits;
}

SetMask unrank(std::uint64_t r, int n, int k) {
  if (k < 0 || k > n) throw InputError("unrank: k out of range");
  const std::uint64_t total = binom(n, k);
  if (r >= total) {
    throw InputError("unrank: rank " + std::to_string(r) + " outside [0, C(" + std::to_string(n) + "," +
                     std::to_string(k) + "))");
  }
  return SetMask(unrank_bits(r, k), n);
}

int bit_positions(std::uint64_t bits, int* out) {
  int m = 0;
  for (std::uint64_t b = bits; b; b &= b - 1) out[m++] = std::countr_zero(b);
  return m;
}

}  // namespace itershadow
