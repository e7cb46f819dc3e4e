#pragma once

// Scalar types shared by every module. Numeric code is templated on the
// scalar so the same formulas run in double precision and, for certification,
// over exact GMP rationals.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <cmath>
#include <concepts>
#include <string>
#include <string_view>

#include "lightclock/errors.hpp"

namespace lightclock {

using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
concept ExactScalar = std::same_as<Scalar, Rational>;

template <typename Scalar>
concept FieldScalar = std::floating_point<Scalar> || ExactScalar<Scalar>;

/// Square root that stays in the scalar's field. Over rationals only perfect
/// squares have a root; anything else is a domain error.
Rational exact_sqrt(const Rational& x);

template <FieldScalar Scalar>
Scalar sqrt_of(const Scalar& x) {
  if constexpr (ExactScalar<Scalar>) {
    return exact_sqrt(x);
  } else {
    if (x < Scalar(0)) throw Error(ErrorKind::Domain, "square root of a negative value");
    return std::sqrt(x);
  }
}

template <FieldScalar Scalar>
Scalar abs_of(const Scalar& x) {
  return x < Scalar(0) ? Scalar(-x) : x;
}

template <FieldScalar Scalar>
double to_double(const Scalar& x) {
  return static_cast<double>(x);
}

/// True when x is a perfect square of a rational (numerator and denominator
/// in lowest terms are both integer squares).
bool is_rational_square(const Rational& x);

/// Exact rational value of a decimal literal such as "0.6", "-1.25e-3", or a
/// fraction "3/5". Rejects anything else.
Rational parse_rational(std::string_view text);

/// Exact rational value of a finite double (every double is a dyadic rational).
Rational rational_from_double(double x);

std::string to_string(const Rational& x);

}  // namespace lightclock
