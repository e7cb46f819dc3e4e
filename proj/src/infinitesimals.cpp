#include "lightclock/infinitesimals.hpp"

namespace lightclock {

Rational GridApprox::error_to(double r) const {
  Rational diff = value() - rational_from_double(r);
  return diff < 0 ? Rational(-diff) : diff;
}

GridApprox grid_approximate(double r, const BigInt& omega) {
  if (omega < 1) throw Error(ErrorKind::Parameter, "grid scale omega must be >= 1");
  Rational target = rational_from_double(r);
  Rational bound(omega);
  if (abs_of(target) >= bound) {
    throw Error(ErrorKind::OutOfGrid, "|r| must be smaller than omega");
  }

  // round(target * omega), halves away from zero
  Rational scaled = target * bound;
  Rational magnitude = abs_of(scaled);
  Rational shifted = magnitude + Rational(1, 2);
  BigInt rounded = boost::multiprecision::numerator(shifted) / boost::multiprecision::denominator(shifted);
  if (scaled < 0) rounded = -rounded;

  if (abs(rounded) >= omega * omega) {
    throw Error(ErrorKind::OutOfGrid, "nearest grid numerator leaves |m| < omega^2");
  }
  return GridApprox{rounded, omega};
}

}  // namespace lightclock
