#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "pcmp/rng.hpp"

namespace pcmp {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational scalar. Always normalized: den > 0, gcd(|num|, den) = 1,
// zero is 0/1. Signs and equality of blinded values must be decided without
// rounding, so there is no floating-point constructor on purpose.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(int n) : num_(n), den_(1) {}          // NOLINT: implicit for literals
  Rational(long long n) : num_(n), den_(1) {}    // NOLINT
  Rational(BigInt n) : num_(std::move(n)), den_(1) {}  // NOLINT

  Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    normalize();
  }

  // Accepts "9", "-7/3"; whitespace and anything else is rejected.
  static Rational parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text), 1);
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }

  // Canonical text form used in transcripts; integers render as "n/1".
  std::string str() const { return num_.str() + "/" + den_.str(); }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  int sign() const { return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0); }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  friend Rational operator-(const Rational& x) {
    Rational r;
    r.num_ = -x.num_;
    r.den_ = x.den_;
    return r;
  }

  friend Rational operator+(const Rational& x, const Rational& y) {
    return Rational(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
  }
  friend Rational operator-(const Rational& x, const Rational& y) {
    return Rational(x.num_ * y.den_ - y.num_ * x.den_, x.den_ * y.den_);
  }
  friend Rational operator*(const Rational& x, const Rational& y) {
    return Rational(x.num_ * y.num_, x.den_ * y.den_);
  }
  friend Rational operator/(const Rational& x, const Rational& y) {
    if (y.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(x.num_ * y.den_, x.den_ * y.num_);
  }

  Rational& operator+=(const Rational& y) { return *this = *this + y; }
  Rational& operator-=(const Rational& y) { return *this = *this - y; }
  Rational& operator*=(const Rational& y) { return *this = *this * y; }

  // Normalized representation makes memberwise equality exact.
  friend bool operator==(const Rational& x, const Rational& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }
  friend bool operator!=(const Rational& x, const Rational& y) { return !(x == y); }

  friend bool operator<(const Rational& x, const Rational& y) {
    return x.num_ * y.den_ < y.num_ * x.den_;
  }
  friend bool operator>(const Rational& x, const Rational& y) { return y < x; }
  friend bool operator<=(const Rational& x, const Rational& y) { return !(y < x); }
  friend bool operator>=(const Rational& x, const Rational& y) { return !(x < y); }

  double to_double() const {
    return num_.convert_to<double>() / den_.convert_to<double>();
  }

 private:
  void normalize() {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    const BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  static BigInt parse_int(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const bool has_sign = !s.empty() && s.front() == '-';
    const std::string_view digits = has_sign ? s.substr(1) : s;
    if (digits.empty()) throw std::invalid_argument("Rational::parse: empty number");
    for (char ch : digits) {
      if (ch < '0' || ch > '9')
        throw std::invalid_argument("Rational::parse: bad literal '" + std::string(s) + "'");
    }
    return BigInt(std::string(s));
  }

  BigInt num_;
  BigInt den_;
};

inline int sign(const Rational& x) { return x.sign(); }

// Uniform in [0, bound) over arbitrary-precision integers, by rejection on
// msb(bound-1)+1 raw bits.
inline BigInt uniform_below(Rng& rng, const BigInt& bound) {
  if (bound <= 0) throw std::invalid_argument("uniform_below: bound must be positive");
  if (bound == 1) return 0;
  const std::size_t n_bits = boost::multiprecision::msb(bound - 1) + 1;
  const std::size_t n_words = (n_bits + 63) / 64;
  const unsigned top_bits = static_cast<unsigned>(n_bits - (n_words - 1) * 64);
  const std::uint64_t top_mask =
      top_bits == 64 ? ~0ull : ((std::uint64_t(1) << top_bits) - 1);
  for (;;) {
    BigInt v = 0;
    for (std::size_t w = 0; w < n_words; ++w) {
      std::uint64_t word = rng.next_u64();
      if (w + 1 == n_words) word &= top_mask;
      v |= BigInt(word) << (64 * w);
    }
    if (v < bound) return v;
  }
}

// Random rational on the finite grid: numerator uniform in [-2^bits, 2^bits],
// denominator uniform in [1, 2^bits]; returned in lowest terms. With nonzero
// set, resamples until the value is not 0.
inline Rational sample_scalar(Rng& rng, unsigned magnitude_bits, bool nonzero) {
  if (magnitude_bits < 1)
    throw std::invalid_argument("sample_scalar: magnitude_bits must be >= 1");
  const BigInt half = BigInt(1) << magnitude_bits;
  const BigInt num_span = 2 * half + 1;
  for (;;) {
    const BigInt num = uniform_below(rng, num_span) - half;
    const BigInt den = uniform_below(rng, half) + 1;
    Rational r(num, den);
    if (!nonzero || !r.is_zero()) return r;
  }
}

}  // namespace pcmp
