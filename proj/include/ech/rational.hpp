#pragma once

// Exact rational arithmetic. Every action, threshold and epsilon in the
// library goes through this type; nothing filtration-related ever touches a
// float, so comparisons and ties are decided exactly.
//
// Storage is a reduced int64 fraction with positive denominator. Arithmetic
// runs through __int128 and both components are capped at 2^62, which keeps
// every intermediate product well inside 128 bits; anything larger throws
// instead of wrapping. The magnitudes that actually occur here (lattice
// sums over denominators like 100000, epsilons down to 1e-6) stay far below
// the cap.

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace ech {

class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t n) : p_(n), q_(1) { check_magnitude(p_); }  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den) : p_(num), q_(den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    normalize();
  }

  std::int64_t num() const { return p_; }
  std::int64_t den() const { return q_; }

  bool is_zero() const { return p_ == 0; }
  bool is_integer() const { return q_ == 1; }

  // Largest integer <= value; exact, correct for negatives.
  std::int64_t floor() const {
    std::int64_t d = p_ / q_;
    if (p_ % q_ != 0 && p_ < 0) --d;
    return d;
  }

  double to_double() const { return static_cast<double>(p_) / static_cast<double>(q_); }

  // Canonical form "p/q" with q > 0, also accepted back by parse().
  std::string str() const { return std::to_string(p_) + "/" + std::to_string(q_); }

  // Accepts "p/q" or a bare integer "p".
  static Rational parse(const std::string& s) {
    const auto bad = [&] { throw ParseError("not a rational: '" + s + "'"); };
    std::size_t slash = s.find('/');
    try {
      std::size_t used = 0;
      std::int64_t num = std::stoll(s.substr(0, slash), &used);
      if (used != (slash == std::string::npos ? s.size() : slash)) bad();
      if (slash == std::string::npos) return Rational(num);
      std::int64_t den = std::stoll(s.substr(slash + 1), &used);
      if (used != s.size() - slash - 1) bad();
      return Rational(num, den);
    } catch (const std::invalid_argument&) {
      bad();
    } catch (const std::out_of_range&) {
      bad();
    }
    return Rational();  // unreachable
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_i128(w(a.p_) * b.q_ + w(b.p_) * a.q_, w(a.q_) * b.q_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_i128(w(a.p_) * b.q_ - w(b.p_) * a.q_, w(a.q_) * b.q_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_i128(w(a.p_) * b.p_, w(a.q_) * b.q_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.p_ == 0) throw std::domain_error("Rational: division by zero");
    return from_i128(w(a.p_) * b.q_, w(a.q_) * b.p_);
  }
  Rational operator-() const {
    Rational r;
    r.p_ = -p_;
    r.q_ = q_;
    return r;
  }
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.p_ == b.p_ && a.q_ == b.q_;  // both reduced
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return w(a.p_) * b.q_ < w(b.p_) * a.q_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  using i128 = __int128;
  static i128 w(std::int64_t v) { return static_cast<i128>(v); }
  static constexpr std::int64_t kMagCap = std::int64_t{1} << 62;

  static void check_magnitude(std::int64_t v) {
    if (v >= kMagCap || v <= -kMagCap)
      throw std::overflow_error("Rational: magnitude exceeds 2^62 cap");
  }

  static i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from_i128(i128 num, i128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) return Rational();
    i128 g = gcd128(num, den);
    num /= g;
    den /= g;
    constexpr i128 cap = static_cast<i128>(std::int64_t{1} << 62);
    if (num >= cap || num <= -cap || den >= cap)
      throw std::overflow_error("Rational: magnitude exceeds 2^62 cap");
    Rational r;
    r.p_ = static_cast<std::int64_t>(num);
    r.q_ = static_cast<std::int64_t>(den);
    return r;
  }

  void normalize() {
    if (q_ < 0) {
      p_ = -p_;
      q_ = -q_;
    }
    if (p_ == 0) {
      q_ = 1;
      return;
    }
    std::int64_t g = std::gcd(p_ < 0 ? -p_ : p_, q_);
    p_ /= g;
    q_ /= g;
    check_magnitude(p_);
    check_magnitude(q_);
  }

  std::int64_t p_ = 0;
  std::int64_t q_ = 1;
};

inline Rational abs(const Rational& r) { return r.num() < 0 ? -r : r; }

}  // namespace ech
