#pragma once

// The linear effect line element and the algebra leading to it.
//
// Local s-frame interval:   dS^2 = (c dt^s)^2 - (dr^s)^2
// Linear map (A)/(B):       dr^s = (1 - alpha beta) dr^m - alpha dT^m
//                           dT^s = beta dr^m + dT^m,        dT^m = c dt^m
// Time-reversal symmetry kills the dr dT cross term, which fixes
//   alpha = -sqrt(1 - eta),  beta = sqrt(1 - eta) / eta,
// and a stationary m-point (dr^m/dT^m = 0) pins eta = 1 - (v+d)^2/c^2 = lambda.
// Pulling the interval back gives
//   dS^2 = lambda (c dt^m)^2 - (1/lambda) (dr^m)^2.
//
// Everything templated on Scalar runs both in double precision and over exact
// rationals (the certification path).

#include <utility>

#include "lightclock/errors.hpp"
#include "lightclock/infinitesimals.hpp"
#include "lightclock/scalar.hpp"

namespace lightclock {

template <FieldScalar Scalar>
struct LineElementParams {
  Scalar v{0};
  Scalar d{0};
  Scalar c{1};

  Scalar combined() const { return v + d; }
};

/// lambda = 1 - (v+d)^2 / c^2, restricted to 0 <= v+d < c so that 0 < lambda <= 1.
template <FieldScalar Scalar>
Scalar lambda_factor(const LineElementParams<Scalar>& p) {
  if (!(p.c > Scalar(0))) throw Error(ErrorKind::Parameter, "light speed c must be positive");
  if constexpr (std::floating_point<Scalar>) {
    if (!std::isfinite(p.v) || !std::isfinite(p.d) || !std::isfinite(p.c)) {
      throw Error(ErrorKind::Parameter, "velocities must be finite");
    }
  }
  const Scalar u = p.combined();
  if (u >= p.c || u <= Scalar(-p.c)) {
    throw Error(ErrorKind::Superluminal, "|v + d| must be below c (lambda must stay nonzero)");
  }
  if (u < Scalar(0)) throw Error(ErrorKind::Parameter, "v + d must be nonnegative");
  return (p.c - u) * (p.c + u) / (p.c * p.c);
}

/// gamma = sqrt(lambda), in (0, 1]. Note the reciprocal of the usual Lorentz factor.
template <FieldScalar Scalar>
Scalar gamma_factor(const LineElementParams<Scalar>& p) {
  return sqrt_of(lambda_factor(p));
}

template <FieldScalar Scalar>
struct PhotonSplit {
  TruncatedHyper<Scalar> dR;  // (v + d) dt^s
  TruncatedHyper<Scalar> dT;  // c dt^s
  Scalar ratio;               // st(dR / dT) = (v + d) / c
};

/// ((v + d) + c) dt^s = dR^s + dT^s for a pulse from a source moving at v + d.
template <FieldScalar Scalar>
PhotonSplit<Scalar> photon_galilean_split(const Scalar& v, const Scalar& d, const Scalar& c,
                                          const TruncatedHyper<Scalar>& dts) {
  if (!dts.is_pure_infinitesimal()) {
    throw Error(ErrorKind::Parameter, "dt^s must be a pure infinitesimal");
  }
  if (!(c > Scalar(0))) throw Error(ErrorKind::Parameter, "light speed c must be positive");
  TruncatedHyper<Scalar> dR = dts * Scalar(v + d);
  TruncatedHyper<Scalar> dT = dts * c;
  Scalar ratio = standard_ratio(dR, dT);
  return {std::move(dR), std::move(dT), std::move(ratio)};
}

template <FieldScalar Scalar>
struct TransformCoeffs {
  Scalar alpha{0};
  Scalar beta{0};
  Scalar eta{1};
};

template <FieldScalar Scalar>
void require_eta_in_range(const Scalar& eta) {
  if (!(eta > Scalar(0)) || eta > Scalar(1)) throw Error(ErrorKind::Domain, "eta must lie in (0, 1]");
}

/// The branch alpha = -sqrt(1 - eta) of the cross-term constraint.
template <FieldScalar Scalar>
TransformCoeffs<Scalar> solve_transform_coeffs(const Scalar& eta) {
  require_eta_in_range(eta);
  const Scalar root = sqrt_of(Scalar(Scalar(1) - eta));
  return {Scalar(-root), Scalar(root / eta), eta};
}

/// Same as solve_transform_coeffs(lambda_factor(p)), using sqrt(1 - lambda) = (v+d)/c
/// so no square root is taken. Exact over rationals for every rational (v, d, c).
template <FieldScalar Scalar>
TransformCoeffs<Scalar> solve_transform_coeffs(const LineElementParams<Scalar>& p) {
  const Scalar eta = lambda_factor(p);
  const Scalar root = p.combined() / p.c;
  return {Scalar(-root), Scalar(root / eta), eta};
}

/// Matrix of (A)/(B) acting on (dr^m, dT^m).
template <FieldScalar Scalar>
Eigen::Matrix<Scalar, 2, 2> transform_matrix(const Scalar& alpha, const Scalar& beta) {
  Eigen::Matrix<Scalar, 2, 2> m;
  m << Scalar(1) - alpha * beta, Scalar(-alpha),
       beta, Scalar(1);
  return m;
}

template <FieldScalar Scalar>
Eigen::Matrix<Scalar, 2, 2> transform_matrix(const TransformCoeffs<Scalar>& coeffs) {
  return transform_matrix(coeffs.alpha, coeffs.beta);
}

/// Coefficients of dS^2 = a (dT^m)^2 + b dr^m dT^m + q (dr^m)^2.
template <FieldScalar Scalar>
struct QuadraticCoeffs {
  Scalar dT2{0};
  Scalar cross{0};
  Scalar dr2{0};
};

template <FieldScalar Scalar>
QuadraticCoeffs<Scalar> expand_quadratic(const Scalar& alpha, const Scalar& beta) {
  const Scalar one(1);
  const Scalar shear = one - alpha * beta;
  return {one - alpha * alpha,
          Scalar(2) * (alpha + beta * (one - alpha * alpha)),
          beta * beta - shear * shear};
}

/// (dr^s, dT^s) from (dr^m, dT^m), applied order by order to the eps-series.
template <FieldScalar Scalar>
std::pair<TruncatedHyper<Scalar>, TruncatedHyper<Scalar>> transform_differentials(
    const TransformCoeffs<Scalar>& coeffs, const TruncatedHyper<Scalar>& drm,
    const TruncatedHyper<Scalar>& dTm) {
  if (drm.order() != dTm.order()) {
    throw Error(ErrorKind::OrderMismatch, "differentials must share a truncation order");
  }
  Eigen::Matrix<Scalar, 2, Eigen::Dynamic> stacked(2, drm.order() + 1);
  stacked.row(0) = drm.coeffs().transpose();
  stacked.row(1) = dTm.coeffs().transpose();
  const Eigen::Matrix<Scalar, 2, Eigen::Dynamic> mapped = transform_matrix(coeffs) * stacked;
  return {TruncatedHyper<Scalar>(VectorX<Scalar>(mapped.row(0).transpose())),
          TruncatedHyper<Scalar>(VectorX<Scalar>(mapped.row(1).transpose()))};
}

/// dr^s/dT^s as a function of x = dr^m/dT^m, in the solved form
///   ((1/eta) x + sqrt(1-eta)) / ((sqrt(1-eta)/eta) x + 1).
template <FieldScalar Scalar>
Scalar velocity_ratio(const TransformCoeffs<Scalar>& coeffs, const Scalar& x) {
  const Scalar root = Scalar(-coeffs.alpha);
  const Scalar inv_eta = Scalar(1) / coeffs.eta;
  const Scalar den = root * inv_eta * x + Scalar(1);
  if (den == Scalar(0)) throw Error(ErrorKind::Pole, "velocity ratio denominator vanishes");
  return (inv_eta * x + root) / den;
}

/// dr^s/dT^s for an arbitrary (alpha, beta), read off (A)/(B) directly.
template <FieldScalar Scalar>
Scalar branch_velocity_ratio(const Scalar& alpha, const Scalar& beta, const Scalar& x) {
  const Scalar den = beta * x + Scalar(1);
  if (den == Scalar(0)) throw Error(ErrorKind::Pole, "velocity ratio denominator vanishes");
  return ((Scalar(1) - alpha * beta) * x - alpha) / den;
}

struct BranchDiagnostic {
  double alpha = 0.0;
  double beta = 0.0;
  double ratio = 0.0;  // dr^s/dT^s at dr^m/dT^m = 0
  bool rejected = false;
  bool branches_coincide = false;
};

/// Evaluates the alpha = +sqrt(1 - eta) branch. A negative ratio contradicts
/// 0 <= v + d < c.
BranchDiagnostic check_rejected_branch(double eta);

enum class Frame { S, M };

template <FieldScalar Scalar>
struct Displacement {
  TruncatedHyper<Scalar> dr;
  TruncatedHyper<Scalar> dt;
  Frame frame = Frame::S;

  TruncatedHyper<Scalar> dT(const Scalar& c) const { return dt * c; }
};

template <FieldScalar Scalar>
void require_frame(const Displacement<Scalar>& d, Frame expected) {
  if (d.frame != expected) {
    throw Error(ErrorKind::Frame, expected == Frame::S ? "expected an s-frame displacement"
                                                       : "expected an m-frame displacement");
  }
}

/// (c dt^s)^2 - (dr^s)^2
template <FieldScalar Scalar>
TruncatedHyper<Scalar> line_element_s(const Displacement<Scalar>& d, const Scalar& c) {
  require_frame(d, Frame::S);
  return square(d.dT(c)) - square(d.dr);
}

/// lambda (c dt^m)^2 - (1/lambda) (dr^m)^2 for an explicit lambda in (0, 1].
template <FieldScalar Scalar>
TruncatedHyper<Scalar> line_element_m(const Displacement<Scalar>& d, const Scalar& c,
                                      const Scalar& lambda) {
  require_frame(d, Frame::M);
  if (!(lambda > Scalar(0)) || lambda > Scalar(1)) {
    throw Error(ErrorKind::Superluminal, "lambda must lie in (0, 1]");
  }
  return square(d.dT(c)) * lambda - square(d.dr) * Scalar(Scalar(1) / lambda);
}

template <FieldScalar Scalar>
TruncatedHyper<Scalar> line_element_m(const Displacement<Scalar>& d,
                                      const LineElementParams<Scalar>& p) {
  return line_element_m(d, p.c, lambda_factor(p));
}

/// dt^s = gamma dt^m for a clock at rest in both frames.
template <FieldScalar Scalar>
TruncatedHyper<Scalar> time_dilation_relation(const LineElementParams<Scalar>& p,
                                              const TruncatedHyper<Scalar>& dtm) {
  return dtm * gamma_factor(p);
}

/// Substratum velocity w = (c/2) ln((1 + v^2/c^2) / (1 - v^2/c^2)). Even in v.
double nsppm_velocity(double v, double c);

/// Conventional rapidity (c/2) ln((1 + v/c) / (1 - v/c)), for comparison tables.
double standard_rapidity(double v, double c);

/// Nonnegative v with nsppm_velocity(v, c) == w, by bisection on [0, c (1 - 1e-12)].
double nsppm_velocity_inverse(double w, double c);

/// w^{-1}(w(v1) + w(v2)).
double compose_velocities_additive_w(double v1, double v2, double c);

}  // namespace lightclock
