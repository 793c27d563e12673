/// @file rational.hpp
/// @brief Arbitrary-precision integers and exact rationals extended with a
///        first-class +infinity (reciprocal convention 1/inf = 0).
///
/// No floating point is used anywhere in this module; every comparison and
/// every derived value is exact and reproducible bit for bit.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nslab {

class RationalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sign-magnitude big integer, base 2^32 limbs.
class BigInt {
 public:
  BigInt() = default;
  BigInt(long long v);  // NOLINT: implicit by design
  static BigInt from_string(const std::string& s);

  bool negative() const { return negative_; }
  bool is_zero() const { return limbs_.empty(); }
  int signum() const { return is_zero() ? 0 : (negative_ ? -1 : 1); }

  BigInt operator-() const;
  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator*(const BigInt& o) const;
  /// Truncated division (quotient rounds toward zero), throws on zero divisor.
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
  BigInt operator/(const BigInt& o) const;
  BigInt operator%(const BigInt& o) const;

  /// -1, 0, 1
  static int compare(const BigInt& a, const BigInt& b);
  bool operator==(const BigInt& o) const { return compare(*this, o) == 0; }
  bool operator!=(const BigInt& o) const { return compare(*this, o) != 0; }
  bool operator<(const BigInt& o) const { return compare(*this, o) < 0; }
  bool operator<=(const BigInt& o) const { return compare(*this, o) <= 0; }
  bool operator>(const BigInt& o) const { return compare(*this, o) > 0; }
  bool operator>=(const BigInt& o) const { return compare(*this, o) >= 0; }

  BigInt abs() const;
  static BigInt gcd(BigInt a, BigInt b);

  std::string to_string() const;
  /// Throws if the value does not fit.
  long long to_int64() const;

 private:
  static int compare_mag(const std::vector<std::uint32_t>& a,
                         const std::vector<std::uint32_t>& b);
  static std::vector<std::uint32_t> add_mag(
      const std::vector<std::uint32_t>& a,
      const std::vector<std::uint32_t>& b);
  static std::vector<std::uint32_t> sub_mag(
      const std::vector<std::uint32_t>& a,
      const std::vector<std::uint32_t>& b);  // requires a >= b
  void trim();

  bool negative_ = false;
  std::vector<std::uint32_t> limbs_;  // little-endian, no trailing zeros
};

/// Exact rational with +infinity. Canonical form: den > 0, gcd(num, den) = 1.
class ExtRational {
 public:
  ExtRational() : num_(0), den_(1) {}
  ExtRational(long long v) : num_(v), den_(1) {}  // NOLINT
  ExtRational(BigInt num, BigInt den);
  static ExtRational infinity();
  /// Parses "num/den", plain integers, or "inf".
  static ExtRational parse(const std::string& s);

  bool is_infinite() const { return infinite_; }
  bool is_zero() const { return !infinite_ && num_.is_zero(); }
  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  ExtRational operator+(const ExtRational& o) const;
  ExtRational operator-(const ExtRational& o) const;
  ExtRational operator*(const ExtRational& o) const;
  ExtRational operator/(const ExtRational& o) const;
  ExtRational operator-() const;

  /// 1/x with the conventions 1/inf = 0 and 1/0 = inf.
  ExtRational reciprocal() const;

  static int compare(const ExtRational& a, const ExtRational& b);
  bool operator==(const ExtRational& o) const { return compare(*this, o) == 0; }
  bool operator!=(const ExtRational& o) const { return compare(*this, o) != 0; }
  bool operator<(const ExtRational& o) const { return compare(*this, o) < 0; }
  bool operator<=(const ExtRational& o) const { return compare(*this, o) <= 0; }
  bool operator>(const ExtRational& o) const { return compare(*this, o) > 0; }
  bool operator>=(const ExtRational& o) const { return compare(*this, o) >= 0; }

  /// Largest integer <= value (finite values only).
  BigInt floor() const;

  /// "num/den", plain integer when den = 1, or "inf".
  std::string to_string() const;
  /// For reporting only; never used in ledger decisions.
  double to_double() const;

 private:
  void normalize();

  bool infinite_ = false;
  BigInt num_;
  BigInt den_;
};

inline ExtRational rat(long long num, long long den = 1) {
  return ExtRational(BigInt(num), BigInt(den));
}

}  // namespace nslab
