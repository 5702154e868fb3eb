#pragma once

// Exact arithmetic types. GMP-backed through Boost.Multiprecision; values are
// kept canonical (reduced, positive denominator) by the backend.

#include <limits>
#include <string>

#include <boost/multiprecision/gmp.hpp>

#include "chipfire/error.hpp"

namespace chipfire {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Always "p/q", including integers ("1/1", "0/1").
inline std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

/// Accepts "p/q" or a bare integer "p".
inline Rational parse_rational(const std::string& text) {
  try {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("not a rational number: '" + text + "'");
  }
}

namespace detail {

/// int64 that throws on overflow. Lets the simplex run on machine words and
/// redo the solve with big integers only when an entry outgrows them.
class CheckedInt {
 public:
  struct Overflow {};

  CheckedInt() = default;
  CheckedInt(long long v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  long long value() const { return v_; }
  friend CheckedInt operator+(CheckedInt a, CheckedInt b) {
    long long r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) throw Overflow{};
    return r;
  }
  friend CheckedInt operator-(CheckedInt a, CheckedInt b) {
    long long r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw Overflow{};
    return r;
  }
  friend CheckedInt operator*(CheckedInt a, CheckedInt b) {
    long long r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw Overflow{};
    return r;
  }
  friend CheckedInt operator/(CheckedInt a, CheckedInt b) {
    if (a.v_ == std::numeric_limits<long long>::min() && b.v_ == -1) throw Overflow{};
    return a.v_ / b.v_;
  }
  CheckedInt operator-() const { return CheckedInt(0) - *this; }
  friend auto operator<=>(CheckedInt, CheckedInt) = default;
  friend bool operator==(CheckedInt, CheckedInt) = default;

 private:
  long long v_ = 0;
};

inline BigInt to_big(const CheckedInt& x) { return BigInt(x.value()); }
inline BigInt to_big(const BigInt& x) { return x; }

}  // namespace detail

}  // namespace chipfire
