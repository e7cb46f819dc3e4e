#include "lightclock/line_element.hpp"

#include <cmath>

namespace lightclock {

namespace {

constexpr double kInverseCeiling = 1.0 - 1e-12;

void require_subluminal(double v, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::Parameter, "light speed c must be positive");
  if (!std::isfinite(v) || !(std::abs(v) < c)) throw Error(ErrorKind::Domain, "|v| must be below c");
}

}  // namespace

BranchDiagnostic check_rejected_branch(double eta) {
  require_eta_in_range(eta);
  BranchDiagnostic diag;
  diag.alpha = std::sqrt(1.0 - eta);
  // alpha + beta (1 - alpha^2) = 0 with 1 - alpha^2 = eta
  diag.beta = -diag.alpha / eta;
  diag.ratio = branch_velocity_ratio(diag.alpha, diag.beta, 0.0);
  diag.rejected = diag.ratio < 0.0;
  diag.branches_coincide = diag.alpha == 0.0;
  return diag;
}

double nsppm_velocity(double v, double c) {
  require_subluminal(v, c);
  const double x = (v / c) * (v / c);
  // (1/2) ln((1+x)/(1-x)) == atanh(x), which keeps precision for small x
  return c * std::atanh(x);
}

double standard_rapidity(double v, double c) {
  require_subluminal(v, c);
  return c * std::atanh(v / c);
}

double nsppm_velocity_inverse(double w, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::Parameter, "light speed c must be positive");
  double lo = 0.0;
  double hi = c * kInverseCeiling;
  if (!std::isfinite(w) || w < 0.0 || w > nsppm_velocity(hi, c)) {
    throw Error(ErrorKind::Domain, "w is outside the range of the velocity map");
  }
  if (w == 0.0) return 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (nsppm_velocity(mid, c) < w) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double err_lo = w - nsppm_velocity(lo, c);
  const double err_hi = nsppm_velocity(hi, c) - w;
  return err_lo <= err_hi ? lo : hi;
}

double compose_velocities_additive_w(double v1, double v2, double c) {
  return nsppm_velocity_inverse(nsppm_velocity(v1, c) + nsppm_velocity(v2, c), c);
}

}  // namespace lightclock
