#pragma once

// Exact 64-bit rational with overflow detection.

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "errors.hpp"

namespace chanlab {

class Fraction {
 public:
  constexpr Fraction() = default;
  constexpr Fraction(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Fraction(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    require(d != 0, ErrorCode::invalid_parameter, "zero denominator");
    normalize();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Fraction operator+(const Fraction& a, const Fraction& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const std::int64_t l = mul(a.den_ / g, b.den_);
    return Fraction(add(mul(a.num_, l / a.den_), mul(b.num_, l / b.den_)), l);
  }
  friend Fraction operator-(const Fraction& a) { return Fraction(mul(a.num_, -1), a.den_); }
  friend Fraction operator-(const Fraction& a, const Fraction& b) { return a + (-b); }
  friend Fraction operator*(const Fraction& a, const Fraction& b) {
    const std::int64_t g1 = std::gcd(a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_, a.den_);
    const std::int64_t n = mul(g1 ? a.num_ / g1 : 0, g2 ? b.num_ / g2 : 0);
    const std::int64_t d = mul(a.den_ / (g2 ? g2 : 1), b.den_ / (g1 ? g1 : 1));
    return Fraction(n, d);
  }
  friend Fraction operator/(const Fraction& a, const Fraction& b) {
    require(b.num_ != 0, ErrorCode::invalid_parameter, "division by zero");
    return a * Fraction(b.den_, b.num_);
  }
  Fraction& operator+=(const Fraction& o) { return *this = *this + o; }
  Fraction& operator*=(const Fraction& o) { return *this = *this * o; }

  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::ostream& operator<<(std::ostream& os, const Fraction& f) { return os << f.str(); }

 private:
  static std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::overflow, "int64 product");
    return r;
  }
  static std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::overflow, "int64 sum");
    return r;
  }
  void normalize() {
    if (den_ < 0) {
      num_ = mul(num_, -1);
      den_ = mul(den_, -1);
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace chanlab
