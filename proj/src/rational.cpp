#include "nslab/rational.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace nslab {

// ---- BigInt ---------------------------------------------------------------

BigInt::BigInt(long long v) {
  negative_ = v < 0;
  unsigned long long m =
      negative_ ? ~static_cast<unsigned long long>(v) + 1ULL
                : static_cast<unsigned long long>(v);
  while (m) {
    limbs_.push_back(static_cast<std::uint32_t>(m & 0xffffffffULL));
    m >>= 32;
  }
}

void BigInt::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  if (limbs_.empty()) negative_ = false;
}

int BigInt::compare_mag(const std::vector<std::uint32_t>& a,
                        const std::vector<std::uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

std::vector<std::uint32_t> BigInt::add_mag(
    const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> r;
  r.reserve(std::max(a.size(), b.size()) + 1);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    std::uint64_t s = carry;
    if (i < a.size()) s += a[i];
    if (i < b.size()) s += b[i];
    r.push_back(static_cast<std::uint32_t>(s & 0xffffffffULL));
    carry = s >> 32;
  }
  if (carry) r.push_back(static_cast<std::uint32_t>(carry));
  return r;
}

std::vector<std::uint32_t> BigInt::sub_mag(
    const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> r;
  r.reserve(a.size());
  std::int64_t borrow = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::int64_t s = static_cast<std::int64_t>(a[i]) - borrow -
                     (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
    if (s < 0) {
      s += 1LL << 32;
      borrow = 1;
    } else {
      borrow = 0;
    }
    r.push_back(static_cast<std::uint32_t>(s));
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  if (!r.is_zero()) r.negative_ = !r.negative_;
  return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
  BigInt r;
  if (negative_ == o.negative_) {
    r.limbs_ = add_mag(limbs_, o.limbs_);
    r.negative_ = negative_;
  } else {
    int c = compare_mag(limbs_, o.limbs_);
    if (c == 0) return BigInt();
    if (c > 0) {
      r.limbs_ = sub_mag(limbs_, o.limbs_);
      r.negative_ = negative_;
    } else {
      r.limbs_ = sub_mag(o.limbs_, limbs_);
      r.negative_ = o.negative_;
    }
  }
  r.trim();
  return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
  if (is_zero() || o.is_zero()) return BigInt();
  BigInt r;
  r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < o.limbs_.size(); ++j) {
      std::uint64_t cur = static_cast<std::uint64_t>(limbs_[i]) * o.limbs_[j] +
                          r.limbs_[i + j] + carry;
      r.limbs_[i + j] = static_cast<std::uint32_t>(cur & 0xffffffffULL);
      carry = cur >> 32;
    }
    std::size_t k = i + o.limbs_.size();
    while (carry) {
      std::uint64_t cur = r.limbs_[k] + carry;
      r.limbs_[k] = static_cast<std::uint32_t>(cur & 0xffffffffULL);
      carry = cur >> 32;
      ++k;
    }
  }
  r.negative_ = negative_ != o.negative_;
  r.trim();
  return r;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
  if (b.is_zero()) throw RationalError("BigInt: division by zero");
  // Magnitude long division, bit by bit (sizes here are small).
  BigInt am = a.abs(), bm = b.abs();
  if (compare_mag(am.limbs_, bm.limbs_) < 0) {
    q = BigInt();
    r = a;
    return;
  }
  std::size_t bits = am.limbs_.size() * 32;
  BigInt quo, rem;
  for (std::size_t i = bits; i-- > 0;) {
    // rem = rem*2 + bit_i(am)
    rem = rem + rem;
    std::uint32_t bit = (am.limbs_[i / 32] >> (i % 32)) & 1u;
    if (bit) rem = rem + BigInt(1);
    // quo bit
    quo = quo + quo;
    if (compare_mag(rem.limbs_, bm.limbs_) >= 0) {
      rem = rem - bm;
      quo = quo + BigInt(1);
    }
  }
  quo.negative_ = !quo.is_zero() && (a.negative_ != b.negative_);
  rem.negative_ = !rem.is_zero() && a.negative_;
  q = quo;
  r = rem;
}

BigInt BigInt::operator/(const BigInt& o) const {
  BigInt q, r;
  divmod(*this, o, q, r);
  return q;
}

BigInt BigInt::operator%(const BigInt& o) const {
  BigInt q, r;
  divmod(*this, o, q, r);
  return r;
}

int BigInt::compare(const BigInt& a, const BigInt& b) {
  if (a.negative_ != b.negative_) return a.negative_ ? -1 : 1;
  int c = compare_mag(a.limbs_, b.limbs_);
  return a.negative_ ? -c : c;
}

BigInt BigInt::abs() const {
  BigInt r = *this;
  r.negative_ = false;
  return r;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a = a.abs();
  b = b.abs();
  while (!b.is_zero()) {
    BigInt r = a % b;
    a = b;
    b = r;
  }
  return a.is_zero() ? BigInt(1) : a;
}

std::string BigInt::to_string() const {
  if (is_zero()) return "0";
  // Repeated division by 1e9.
  BigInt v = abs();
  const BigInt chunk(1000000000LL);
  std::vector<std::uint32_t> parts;
  while (!v.is_zero()) {
    BigInt q, r;
    divmod(v, chunk, q, r);
    long long rv = r.is_zero() ? 0 : r.to_int64();
    parts.push_back(static_cast<std::uint32_t>(rv));
    v = q;
  }
  std::string s = negative_ ? "-" : "";
  s += std::to_string(parts.back());
  for (std::size_t i = parts.size() - 1; i-- > 0;) {
    std::string p = std::to_string(parts[i]);
    s += std::string(9 - p.size(), '0') + p;
  }
  return s;
}

long long BigInt::to_int64() const {
  if (limbs_.size() > 2) throw RationalError("BigInt: does not fit in int64");
  unsigned long long m = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) m = (m << 32) | limbs_[i];
  if (!negative_ && m > 0x7fffffffffffffffULL)
    throw RationalError("BigInt: does not fit in int64");
  if (negative_ && m > 0x8000000000000000ULL)
    throw RationalError("BigInt: does not fit in int64");
  return negative_ ? -static_cast<long long>(m) : static_cast<long long>(m);
}

BigInt BigInt::from_string(const std::string& s) {
  if (s.empty()) throw RationalError("BigInt: empty string");
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw RationalError("BigInt: no digits");
  BigInt v;
  const BigInt ten(10);
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw RationalError("BigInt: bad digit in '" + s + "'");
    v = v * ten + BigInt(s[i] - '0');
  }
  if (neg) v = -v;
  return v;
}

// ---- ExtRational ----------------------------------------------------------

ExtRational::ExtRational(BigInt num, BigInt den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw RationalError("ExtRational: zero denominator");
  normalize();
}

ExtRational ExtRational::infinity() {
  ExtRational r;
  r.infinite_ = true;
  r.num_ = BigInt(1);
  r.den_ = BigInt(1);
  return r;
}

void ExtRational::normalize() {
  if (infinite_) return;
  if (den_.negative()) {
    den_ = -den_;
    num_ = -num_;
  }
  BigInt g = BigInt::gcd(num_, den_);
  num_ = num_ / g;
  den_ = den_ / g;
}

ExtRational ExtRational::operator+(const ExtRational& o) const {
  if (infinite_ && o.infinite_) return infinity();
  if (infinite_ || o.infinite_) return infinity();
  return ExtRational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

ExtRational ExtRational::operator-() const {
  if (infinite_)
    throw RationalError("ExtRational: negation of infinity unsupported");
  ExtRational r = *this;
  r.num_ = -r.num_;
  return r;
}

ExtRational ExtRational::operator-(const ExtRational& o) const {
  if (o.infinite_) {
    if (infinite_) throw RationalError("ExtRational: inf - inf undefined");
    throw RationalError("ExtRational: finite - inf unsupported");
  }
  if (infinite_) return infinity();
  return ExtRational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

ExtRational ExtRational::operator*(const ExtRational& o) const {
  if (infinite_ || o.infinite_) {
    const ExtRational& fin = infinite_ ? o : *this;
    if (!fin.infinite_) {
      if (fin.is_zero()) throw RationalError("ExtRational: 0 * inf undefined");
      if (fin.num_.negative())
        throw RationalError("ExtRational: negative * inf unsupported");
    }
    return infinity();
  }
  return ExtRational(num_ * o.num_, den_ * o.den_);
}

ExtRational ExtRational::operator/(const ExtRational& o) const {
  if (infinite_ && o.infinite_)
    throw RationalError("ExtRational: inf / inf undefined");
  if (o.infinite_) return ExtRational(0);
  if (o.is_zero()) {
    if (is_zero()) throw RationalError("ExtRational: 0 / 0 undefined");
    if (num_.negative())
      throw RationalError("ExtRational: negative / 0 unsupported");
    return infinity();
  }
  if (infinite_) {
    if (o.num_.negative())
      throw RationalError("ExtRational: inf / negative unsupported");
    return infinity();
  }
  return ExtRational(num_ * o.den_, den_ * o.num_);
}

ExtRational ExtRational::reciprocal() const {
  if (infinite_) return ExtRational(0);
  if (is_zero()) return infinity();
  return ExtRational(den_, num_);
}

int ExtRational::compare(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ && b.infinite_) return 0;
  if (a.infinite_) return 1;
  if (b.infinite_) return -1;
  return BigInt::compare(a.num_ * b.den_, b.num_ * a.den_);
}

BigInt ExtRational::floor() const {
  if (infinite_) throw RationalError("ExtRational: floor of infinity");
  BigInt q, r;
  BigInt::divmod(num_, den_, q, r);
  if (r.is_zero() || !num_.negative()) return q;
  return q - BigInt(1);
}

std::string ExtRational::to_string() const {
  if (infinite_) return "inf";
  if (den_ == BigInt(1)) return num_.to_string();
  return num_.to_string() + "/" + den_.to_string();
}

double ExtRational::to_double() const {
  if (infinite_) return std::numeric_limits<double>::infinity();
  // Good enough for reporting: int64 path when possible, else string parse.
  try {
    return static_cast<double>(num_.to_int64()) /
           static_cast<double>(den_.to_int64());
  } catch (const RationalError&) {
    return std::stod(num_.to_string()) / std::stod(den_.to_string());
  }
}

ExtRational ExtRational::parse(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return infinity();
  auto slash = s.find('/');
  if (slash == std::string::npos)
    return ExtRational(BigInt::from_string(s), BigInt(1));
  return ExtRational(BigInt::from_string(s.substr(0, slash)),
                     BigInt::from_string(s.substr(slash + 1)));
}

}  // namespace nslab
