#pragma once

// Truncated power series in one formal infinitesimal eps, used as a finite
// stand-in for hyperreals:
//
//   x = c_0 + c_1 eps + ... + c_K eps^K
//
// c_0 is the standard part. Products discard every term above eps^K, which is
// enough for the quadratic forms built from first-order differentials.

#include <algorithm>
#include <cmath>
#include <string>

#include "lightclock/errors.hpp"
#include "lightclock/scalar.hpp"

namespace lightclock {

inline constexpr Eigen::Index kDefaultOrder = 2;
inline constexpr double kClosenessTolerance = 1e-12;

template <FieldScalar Scalar>
class TruncatedHyper {
 public:
  using Coeffs = VectorX<Scalar>;

  explicit TruncatedHyper(Eigen::Index order = kDefaultOrder) : coeffs_(Coeffs::Zero(order + 1)) {
    if (order < 0) throw Error(ErrorKind::OrderMismatch, "truncation order must be nonnegative");
  }

  explicit TruncatedHyper(Coeffs coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0) throw Error(ErrorKind::OrderMismatch, "at least one coefficient required");
    if constexpr (std::floating_point<Scalar>) {
      if (!coeffs_.allFinite()) throw Error(ErrorKind::Domain, "coefficients must be finite");
    }
  }

  TruncatedHyper(std::initializer_list<Scalar> coeffs, Eigen::Index order)
      : TruncatedHyper(order) {
    if (static_cast<Eigen::Index>(coeffs.size()) > order + 1) {
      throw Error(ErrorKind::OrderMismatch, "more coefficients than the truncation order allows");
    }
    std::copy(coeffs.begin(), coeffs.end(), coeffs_.data());
    if constexpr (std::floating_point<Scalar>) {
      if (!coeffs_.allFinite()) throw Error(ErrorKind::Domain, "coefficients must be finite");
    }
  }

  static TruncatedHyper constant(const Scalar& value, Eigen::Index order = kDefaultOrder) {
    TruncatedHyper x(order);
    x.coeffs_(0) = value;
    return x;
  }

  /// scale * eps^power.
  static TruncatedHyper infinitesimal(const Scalar& scale, Eigen::Index power = 1,
                                      Eigen::Index order = kDefaultOrder) {
    TruncatedHyper x(order);
    if (power < 0) throw Error(ErrorKind::OrderMismatch, "negative power of eps");
    if (power <= order) x.coeffs_(power) = scale;
    return x;
  }

  Eigen::Index order() const noexcept { return coeffs_.size() - 1; }
  const Coeffs& coeffs() const noexcept { return coeffs_; }
  const Scalar& operator[](Eigen::Index k) const { return coeffs_(k); }

  bool is_pure_infinitesimal() const { return coeffs_(0) == Scalar(0); }

  template <FieldScalar Other>
  TruncatedHyper<Other> cast() const {
    VectorX<Other> out(coeffs_.size());
    for (Eigen::Index k = 0; k < coeffs_.size(); ++k) out(k) = static_cast<Other>(coeffs_(k));
    return TruncatedHyper<Other>(std::move(out));
  }

  TruncatedHyper& operator+=(const TruncatedHyper& rhs) {
    require_same_order(rhs);
    coeffs_ += rhs.coeffs_;
    return *this;
  }

  TruncatedHyper& operator-=(const TruncatedHyper& rhs) {
    require_same_order(rhs);
    coeffs_ -= rhs.coeffs_;
    return *this;
  }

  TruncatedHyper& operator*=(const Scalar& s) {
    coeffs_ *= s;
    return *this;
  }

  TruncatedHyper& operator*=(const TruncatedHyper& rhs) {
    *this = *this * rhs;
    return *this;
  }

  TruncatedHyper operator-() const { return TruncatedHyper(Coeffs(-coeffs_)); }

  friend TruncatedHyper operator+(TruncatedHyper lhs, const TruncatedHyper& rhs) { return lhs += rhs; }
  friend TruncatedHyper operator-(TruncatedHyper lhs, const TruncatedHyper& rhs) { return lhs -= rhs; }
  friend TruncatedHyper operator*(TruncatedHyper lhs, const Scalar& s) { return lhs *= s; }
  friend TruncatedHyper operator*(const Scalar& s, TruncatedHyper rhs) { return rhs *= s; }

  /// Cauchy product, truncated at the shared order.
  friend TruncatedHyper operator*(const TruncatedHyper& lhs, const TruncatedHyper& rhs) {
    lhs.require_same_order(rhs);
    Coeffs out(lhs.coeffs_.size());
    for (Eigen::Index k = 0; k < out.size(); ++k) {
      Scalar sum(0);
      for (Eigen::Index i = 0; i <= k; ++i) sum += lhs.coeffs_(i) * rhs.coeffs_(k - i);
      out(k) = sum;
    }
    return TruncatedHyper(std::move(out));
  }

  friend bool operator==(const TruncatedHyper& lhs, const TruncatedHyper& rhs) {
    return lhs.coeffs_.size() == rhs.coeffs_.size() && lhs.coeffs_ == rhs.coeffs_;
  }

 private:
  void require_same_order(const TruncatedHyper& rhs) const {
    if (coeffs_.size() != rhs.coeffs_.size()) {
      throw Error(ErrorKind::OrderMismatch, "truncation orders " + std::to_string(order()) +
                                                " and " + std::to_string(rhs.order()) + " differ");
    }
  }

  Coeffs coeffs_;
};

using Hyper = TruncatedHyper<double>;
using ExactHyper = TruncatedHyper<Rational>;

template <FieldScalar Scalar>
TruncatedHyper<Scalar> hyper_add(const TruncatedHyper<Scalar>& a, const TruncatedHyper<Scalar>& b) {
  return a + b;
}

template <FieldScalar Scalar>
TruncatedHyper<Scalar> hyper_mul(const TruncatedHyper<Scalar>& a, const TruncatedHyper<Scalar>& b) {
  return a * b;
}

template <FieldScalar Scalar>
TruncatedHyper<Scalar> hyper_neg(const TruncatedHyper<Scalar>& a) {
  return -a;
}

template <FieldScalar Scalar>
TruncatedHyper<Scalar> square(const TruncatedHyper<Scalar>& a) {
  return a * a;
}

template <FieldScalar Scalar>
Scalar st(const TruncatedHyper<Scalar>& a) {
  return a[0];
}

/// st(a - b) == 0 up to an absolute tolerance on the standard parts.
template <FieldScalar Scalar>
bool infinitely_close(const TruncatedHyper<Scalar>& a, const TruncatedHyper<Scalar>& b,
                      double tolerance = kClosenessTolerance) {
  if (a.order() != b.order()) {
    throw Error(ErrorKind::OrderMismatch, "closeness needs equal truncation orders");
  }
  Scalar diff = abs_of(Scalar(st(a) - st(b)));
  if constexpr (ExactScalar<Scalar>) {
    return diff <= rational_from_double(tolerance);
  } else {
    return diff <= tolerance;
  }
}

/// Index of the lowest nonzero coefficient, or -1 for zero.
template <FieldScalar Scalar>
Eigen::Index leading_order(const TruncatedHyper<Scalar>& a) {
  for (Eigen::Index k = 0; k <= a.order(); ++k) {
    if (a[k] != Scalar(0)) return k;
  }
  return -1;
}

/// Standard part of num / den, where den is nonzero at some order and num has
/// no lower-order terms than den.
template <FieldScalar Scalar>
Scalar standard_ratio(const TruncatedHyper<Scalar>& num, const TruncatedHyper<Scalar>& den) {
  if (num.order() != den.order()) throw Error(ErrorKind::OrderMismatch, "ratio needs equal orders");
  Eigen::Index k = leading_order(den);
  if (k < 0) throw Error(ErrorKind::DivisionUndefined, "denominator is zero at every order");
  for (Eigen::Index i = 0; i < k; ++i) {
    if (num[i] != Scalar(0)) {
      throw Error(ErrorKind::DivisionUndefined, "quotient is infinite: numerator has lower order");
    }
  }
  return num[k] / den[k];
}

/// A point m/omega of the grid {m/omega : |m| < omega^2}.
struct GridApprox {
  BigInt numerator;
  BigInt scale;

  Rational value() const { return Rational(numerator, scale); }
  /// |m/omega - r| computed exactly.
  Rational error_to(double r) const;
};

/// Nearest grid point to r at scale omega (ties rounded away from zero).
GridApprox grid_approximate(double r, const BigInt& omega);

}  // namespace lightclock
