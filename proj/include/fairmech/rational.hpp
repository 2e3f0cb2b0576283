#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace fairmech {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, kept in lowest terms with a positive denominator.
/// Every quantity the library reports (weights, welfare, payments, shares)
/// is one of these; no floating point enters any result.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(int v) : num_(v), den_(1) {}
  Rational(long v) : num_(v), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}
  Rational(BigInt v) : num_(std::move(v)), den_(1) {}

  Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    normalize();
  }

  Rational(long long num, long long den) : Rational(BigInt(num), BigInt(den)) {}

  /// Parses "p", "-p" or "p/q" with integer p, q.
  static Rational from_string(std::string_view text) {
    auto bad = [&] {
      return std::invalid_argument("Rational: cannot parse '" + std::string(text) + "'");
    };
    auto slash = text.find('/');
    std::string_view num_part = text.substr(0, slash);
    if (!is_integer_token(num_part)) throw bad();
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(num_part)));
    std::string_view den_part = text.substr(slash + 1);
    if (!is_integer_token(den_part)) throw bad();
    return Rational(BigInt(std::string(num_part)), BigInt(std::string(den_part)));
  }

  const BigInt& numerator() const { return num_; }
  const BigInt& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_.sign(); }

  std::string to_string() const {
    std::string s = num_.str();
    if (den_ != 1) {
      s += '/';
      s += den_.str();
    }
    return s;
  }

  friend Rational operator-(const Rational& a) {
    Rational r;
    r.num_ = -a.num_;
    r.den_ = a.den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    Rational r;
    if (a.den_ == b.den_) {
      r.num_ = a.num_ + b.num_;
      r.den_ = a.den_;
      if (r.den_ != 1) r.normalize();
      return r;
    }
    r.num_ = a.num_ * b.den_ + b.num_ * a.den_;
    r.den_ = a.den_ * b.den_;
    r.normalize();
    return r;
  }

  friend Rational operator-(const Rational& a, const Rational& b) {
    Rational r;
    if (a.den_ == b.den_) {
      r.num_ = a.num_ - b.num_;
      r.den_ = a.den_;
      if (r.den_ != 1) r.normalize();
      return r;
    }
    r.num_ = a.num_ * b.den_ - b.num_ * a.den_;
    r.den_ = a.den_ * b.den_;
    r.normalize();
    return r;
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    Rational r;
    r.num_ = a.num_ * b.num_;
    r.den_ = a.den_ * b.den_;
    if (r.den_ != 1) r.normalize();
    return r;
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_.is_zero()) throw std::domain_error("Rational: division by zero");
    Rational r;
    r.num_ = a.num_ * b.den_;
    r.den_ = a.den_ * b.num_;
    r.normalize();
    return r;
  }

  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return a.num_ < b.num_;
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) {
    return os << q.to_string();
  }

 private:
  static bool is_integer_token(std::string_view s) {
    if (!s.empty() && s.front() == '-') s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  }

  void normalize() {
    if (num_.is_zero()) {
      den_ = 1;
      return;
    }
    if (den_.sign() < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    BigInt g = boost::multiprecision::gcd(num_, den_);
    if (g != 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  BigInt num_;
  BigInt den_;  // > 0
};

inline Rational abs(const Rational& q) { return q.sign() < 0 ? -q : q; }

/// Largest integer <= q.
inline BigInt floor_int(const Rational& q) {
  BigInt quo = q.numerator() / q.denominator();
  if (q.numerator().sign() < 0 && quo * q.denominator() != q.numerator()) --quo;
  return quo;
}

/// Largest multiple of `grid` that is <= value; grid must be positive.
inline Rational floor_to_multiple(const Rational& value, const Rational& grid) {
  if (grid.sign() <= 0) throw std::domain_error("floor_to_multiple: grid must be positive");
  return Rational(floor_int(value / grid)) * grid;
}

}  // namespace fairmech
