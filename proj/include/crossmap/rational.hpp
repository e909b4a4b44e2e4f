#ifndef CROSSMAP_RATIONAL_HPP
#define CROSSMAP_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "crossmap/error.hpp"

namespace crossmap {

using BigInt = boost::multiprecision::cpp_int;

/// Exact fraction in lowest terms with a positive denominator.
///
/// Backed by arbitrary precision integers so that composing long chains of
/// crossmaps never overflows. All weights and masses in the library are
/// carried as Rational; nothing in the core rounds.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT(implicit)
  Rational(BigInt numerator, BigInt denominator)
      : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (den_ == 0) {
      throw Error("rational with zero denominator");
    }
    normalize();
  }

  const BigInt& numerator() const { return num_; }
  const BigInt& denominator() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0); }

  Rational operator-() const { return Rational(-num_, den_, Normalized{}); }

  Rational& operator+=(const Rational& rhs) {
    if (den_ == rhs.den_) {
      num_ += rhs.num_;
    } else {
      num_ = num_ * rhs.den_ + rhs.num_ * den_;
      den_ *= rhs.den_;
    }
    normalize();
    return *this;
  }
  Rational& operator-=(const Rational& rhs) { return *this += -rhs; }
  Rational& operator*=(const Rational& rhs) {
    num_ *= rhs.num_;
    den_ *= rhs.den_;
    normalize();
    return *this;
  }
  Rational& operator/=(const Rational& rhs) {
    if (rhs.num_ == 0) {
      throw Error("division by zero");
    }
    num_ *= rhs.den_;
    den_ *= rhs.num_;
    normalize();
    return *this;
  }

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const BigInt lhs = a.num_ * b.den_;
    const BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// Largest integer not greater than the value.
  BigInt floor() const {
    BigInt q = num_ / den_;  // truncates toward zero
    if (num_ < 0 && q * den_ != num_) {
      q -= 1;
    }
    return q;
  }

  double to_double() const {
    return static_cast<double>(boost::multiprecision::cpp_rational(num_, den_));
  }

 private:
  struct Normalized {};
  Rational(BigInt numerator, BigInt denominator, Normalized)
      : num_(std::move(numerator)), den_(std::move(denominator)) {}

  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    const BigInt g = boost::multiprecision::gcd(num_, den_);
    if (g != 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  BigInt num_;
  BigInt den_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// Canonical text: "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  std::string out = r.numerator().str();
  if (!r.is_integer()) {
    out += '/';
    out += r.denominator().str();
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << to_string(r);
}

namespace detail {

inline BigInt pow10(unsigned exponent) {
  BigInt out = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    out *= 10;
  }
  return out;
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

/// Decimal digit string to integer. Leading zeros are dropped first because
/// the cpp_int string constructor reads "0..." as octal.
inline BigInt parse_decimal_digits(std::string_view digits) {
  const auto first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return BigInt(0);
  return BigInt(std::string(digits.substr(first)));
}

inline std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Parses "p/q", an integer, or a base-10 decimal (optionally with an
/// exponent, e.g. "1e-9") into an exact rational. Decimals are read digit by
/// digit so "0.1" is exactly 1/10.
inline Rational parse_rational(std::string_view text) {
  const std::string_view original = text;
  text = detail::trim(text);
  const auto fail = [&](const char* why) -> Rational {
    throw ParseError("malformed number '" + std::string(original) + "': " + why);
  };
  if (text.empty()) return fail("empty");

  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::string_view p = text.substr(0, slash);
    const std::string_view q = text.substr(slash + 1);
    if (!detail::all_digits(p) || !detail::all_digits(q)) {
      return fail("expected p/q with decimal integers");
    }
    const BigInt den = detail::parse_decimal_digits(q);
    if (den == 0) return fail("zero denominator");
    const BigInt num = detail::parse_decimal_digits(p);
    return Rational(negative ? BigInt(-num) : num, den);
  }

  std::string_view mantissa = text;
  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    std::string_view exp_text = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!detail::all_digits(exp_text) || exp_text.size() > 4) {
      return fail("bad exponent");
    }
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
  }

  std::string digits;
  long fraction_digits = 0;
  if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = mantissa.substr(0, dot);
    const std::string_view frac = mantissa.substr(dot + 1);
    if ((!whole.empty() && !detail::all_digits(whole)) ||
        (!frac.empty() && !detail::all_digits(frac)) || (whole.empty() && frac.empty())) {
      return fail("bad decimal");
    }
    digits = std::string(whole) + std::string(frac);
    fraction_digits = static_cast<long>(frac.size());
  } else {
    if (!detail::all_digits(mantissa)) return fail("not a number");
    digits = std::string(mantissa);
  }

  BigInt num = detail::parse_decimal_digits(digits);
  if (negative) num = -num;
  const long scale = exponent - fraction_digits;
  if (scale >= 0) {
    return Rational(num * detail::pow10(static_cast<unsigned>(scale)), 1);
  }
  return Rational(num, detail::pow10(static_cast<unsigned>(-scale)));
}

/// Fixed-point decimal text with `digits` places, truncated toward zero.
inline std::string format_fixed(const Rational& r, unsigned digits) {
  const BigInt scale = detail::pow10(digits);
  BigInt scaled = abs(r).numerator() * scale / r.denominator();
  std::string text = scaled.str();
  if (digits > 0) {
    if (text.size() <= digits) {
      text.insert(0, digits + 1 - text.size(), '0');
    }
    text.insert(text.size() - digits, ".");
  }
  if (r.sign() < 0 && scaled != 0) {
    text.insert(0, "-");
  }
  return text;
}

/// Exact decimal text when the value has a terminating base-10 expansion.
/// Returns the canonical "p/q" form otherwise.
inline std::string to_decimal_string(const Rational& r) {
  BigInt den = r.denominator();
  unsigned twos = 0;
  unsigned fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) {
    return to_string(r);
  }
  const unsigned places = std::max(twos, fives);
  return places == 0 ? to_string(r) : format_fixed(r, places);
}

}  // namespace crossmap

#endif  // CROSSMAP_RATIONAL_HPP
