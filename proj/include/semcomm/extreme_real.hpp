#pragma once

// Signed reals with an unbounded binary exponent.
//
// A value is stored as mantissa * 2^exponent with |mantissa| in [0.5, 1) (or
// exactly zero). Products and quotients are exact up to one rounding of the
// mantissa, so round trips stay at machine precision even for magnitudes far
// outside double range (e.g. 1e-15000). Conversions to and from natural logs
// are provided for interop with lgamma-based code.

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <span>
#include <string>

namespace semcomm {

template <typename Scalar>
class BasicExtremeReal {
 public:
  using Exponent = std::int64_t;

  constexpr BasicExtremeReal() = default;

  BasicExtremeReal(Scalar x) {  // NOLINT(google-explicit-constructor)
    if (x == Scalar(0)) return;
    int e = 0;
    mantissa_ = std::frexp(x, &e);
    exponent_ = e;
  }

  /// Value with the given sign and natural log of its magnitude.
  static BasicExtremeReal from_log(Scalar ln_mag, int sign = 1) {
    if (sign == 0 || ln_mag == -std::numeric_limits<Scalar>::infinity()) return {};
    // ln = k ln2 + r with ln2 split in two so k * ln2_hi is exact.
    constexpr Scalar ln2_hi = Scalar(6.93147180369123816490e-01);
    constexpr Scalar ln2_lo = Scalar(1.90821492927058770002e-10);
    const Scalar k = std::round(ln_mag / std::numbers::ln2_v<Scalar>);
    const Scalar rem = (ln_mag - k * ln2_hi) - k * ln2_lo;
    BasicExtremeReal r;
    r.mantissa_ = std::exp(rem);
    r.exponent_ = static_cast<Exponent>(k);
    if (sign < 0) r.mantissa_ = -r.mantissa_;
    r.normalize();
    return r;
  }

  /// 2^k exactly.
  static BasicExtremeReal exp2(Exponent k) {
    BasicExtremeReal r;
    r.mantissa_ = Scalar(0.5);
    r.exponent_ = k + 1;
    return r;
  }

  static BasicExtremeReal from_parts(Scalar mantissa, Exponent exponent) {
    BasicExtremeReal r;
    r.mantissa_ = mantissa;
    r.exponent_ = exponent;
    r.normalize();
    return r;
  }

  Scalar mantissa() const { return mantissa_; }
  Exponent exponent() const { return exponent_; }

  int sign() const { return mantissa_ > 0 ? 1 : (mantissa_ < 0 ? -1 : 0); }
  bool is_zero() const { return mantissa_ == Scalar(0); }

  Scalar ln_mag() const {
    if (is_zero()) return -std::numeric_limits<Scalar>::infinity();
    return std::log(std::abs(mantissa_)) +
           static_cast<Scalar>(exponent_) * std::numbers::ln2_v<Scalar>;
  }

  Scalar log10_mag() const {
    if (is_zero()) return -std::numeric_limits<Scalar>::infinity();
    return std::log10(std::abs(mantissa_)) +
           static_cast<Scalar>(exponent_) * (std::numbers::ln2_v<Scalar> * std::numbers::log10e_v<Scalar>);
  }

  /// Nearest Scalar; under/overflows to 0 / inf.
  Scalar to_scalar() const {
    if (is_zero()) return Scalar(0);
    constexpr auto lim = std::numeric_limits<Scalar>::max_exponent + 2;
    if (exponent_ > lim) return std::copysign(std::numeric_limits<Scalar>::infinity(), mantissa_);
    if (exponent_ < -lim - std::numeric_limits<Scalar>::digits) return Scalar(0) * mantissa_;
    return std::ldexp(mantissa_, static_cast<int>(exponent_));
  }
  double to_double() const { return static_cast<double>(to_scalar()); }

  BasicExtremeReal abs() const {
    BasicExtremeReal r = *this;
    r.mantissa_ = std::abs(r.mantissa_);
    return r;
  }

  BasicExtremeReal operator-() const {
    BasicExtremeReal r = *this;
    r.mantissa_ = -r.mantissa_;
    return r;
  }

  BasicExtremeReal& operator*=(const BasicExtremeReal& o) {
    if (is_zero() || o.is_zero()) return *this = BasicExtremeReal{};
    mantissa_ *= o.mantissa_;
    exponent_ += o.exponent_;
    normalize();
    return *this;
  }

  BasicExtremeReal& operator/=(const BasicExtremeReal& o) {
    if (o.is_zero()) {
      mantissa_ = mantissa_ / Scalar(0);
      exponent_ = 0;
      return *this;
    }
    if (is_zero()) return *this;
    mantissa_ /= o.mantissa_;
    exponent_ -= o.exponent_;
    normalize();
    return *this;
  }

  BasicExtremeReal& operator+=(const BasicExtremeReal& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    const Exponent shift = o.exponent_ - exponent_;
    constexpr Exponent drop = std::numeric_limits<Scalar>::digits + 2;
    if (shift > drop) return *this = o;
    if (shift < -drop) return *this;
    if (shift >= 0) {
      mantissa_ = std::ldexp(mantissa_, static_cast<int>(-shift)) + o.mantissa_;
      exponent_ = o.exponent_;
    } else {
      mantissa_ += std::ldexp(o.mantissa_, static_cast<int>(shift));
    }
    normalize();
    return *this;
  }

  BasicExtremeReal& operator-=(const BasicExtremeReal& o) { return *this += -o; }

  friend BasicExtremeReal operator*(BasicExtremeReal a, const BasicExtremeReal& b) { return a *= b; }
  friend BasicExtremeReal operator/(BasicExtremeReal a, const BasicExtremeReal& b) { return a /= b; }
  friend BasicExtremeReal operator+(BasicExtremeReal a, const BasicExtremeReal& b) { return a += b; }
  friend BasicExtremeReal operator-(BasicExtremeReal a, const BasicExtremeReal& b) { return a -= b; }

  friend bool operator==(const BasicExtremeReal& a, const BasicExtremeReal& b) {
    return a.mantissa_ == b.mantissa_ && (a.is_zero() || a.exponent_ == b.exponent_);
  }

  friend std::partial_ordering operator<=>(const BasicExtremeReal& a, const BasicExtremeReal& b) {
    const int sa = a.sign();
    const int sb = b.sign();
    if (sa != sb) return sa <=> sb;
    if (sa == 0) return std::partial_ordering::equivalent;
    // Same sign: compare magnitudes, then flip for negatives.
    std::partial_ordering mag = a.exponent_ != b.exponent_
                                    ? (a.exponent_ <=> b.exponent_)
                                    : (std::abs(a.mantissa_) <=> std::abs(b.mantissa_));
    if (sa > 0) return mag;
    if (mag == std::partial_ordering::less) return std::partial_ordering::greater;
    if (mag == std::partial_ordering::greater) return std::partial_ordering::less;
    return mag;
  }

 private:
  void normalize() {
    if (mantissa_ == Scalar(0) || !std::isfinite(mantissa_)) {
      if (mantissa_ == Scalar(0)) exponent_ = 0;
      return;
    }
    int e = 0;
    mantissa_ = std::frexp(mantissa_, &e);
    exponent_ += e;
  }

  Scalar mantissa_ = Scalar(0);
  Exponent exponent_ = 0;
};

using ExtremeReal = BasicExtremeReal<double>;

/// Sum of terms given as natural logs (log-sum-exp), returned in extended form.
template <typename Scalar>
BasicExtremeReal<Scalar> sum_exp(std::span<const Scalar> ln_terms) {
  BasicExtremeReal<Scalar> total;
  for (Scalar t : ln_terms) total += BasicExtremeReal<Scalar>::from_log(t);
  return total;
}

template <typename Scalar>
BasicExtremeReal<Scalar> sum(std::span<const BasicExtremeReal<Scalar>> terms) {
  BasicExtremeReal<Scalar> total;
  for (const auto& t : terms) total += t;
  return total;
}

/// Decimal scientific rendering, e.g. "1.18e-563".
template <typename Scalar>
std::string to_scientific(const BasicExtremeReal<Scalar>& x, int digits = 3) {
  if (x.is_zero()) return "0";
  const auto l10 = static_cast<double>(x.log10_mag());
  double whole = std::floor(l10);
  double lead = std::pow(10.0, l10 - whole);
  const double round = std::pow(10.0, digits - 1);
  lead = std::round(lead * round) / round;
  if (lead >= 10.0) {
    lead /= 10.0;
    whole += 1.0;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%.*fe%lld", x.sign() < 0 ? "-" : "", digits - 1, lead,
                static_cast<long long>(whole));
  return buf;
}

}  // namespace semcomm
