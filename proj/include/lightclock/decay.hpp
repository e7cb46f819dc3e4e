#pragma once

// Exponential decay N(t) = N0 exp(-t / tau), the separable form of the operator
// equation D(T) = k dT/dt, the moving-frame lifetime tau_m = tau_s / gamma, and a
// deterministic Monte Carlo ensemble that realises the law with discrete counts.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lightclock/line_element.hpp"

namespace lightclock {

inline constexpr double kDefaultLifetimeBound = 1e15;
inline constexpr double kFiniteDifferenceStep = 1e-4;  // in units of tau
inline constexpr double kDerivativeTolerance = 1e-8;

struct DecayModel {
  double n0 = 1.0;
  double tau = 1.0;
  Frame frame = Frame::S;
  double tau_bound = kDefaultLifetimeBound;

  DecayModel() = default;
  DecayModel(double n0_, double tau_, Frame frame_ = Frame::S,
             double tau_bound_ = kDefaultLifetimeBound);
};

double population(const DecayModel& model, double t);

/// Derivative of f at t: central difference, or the second-order forward
/// stencil when t - step would leave [0, inf).
template <typename F>
double time_derivative(F&& f, double t, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::Domain, "finite-difference step must be positive");
  if (t - step < 0.0) {
    return (-3.0 * f(t) + 4.0 * f(t + step) - f(t + 2.0 * step)) / (2.0 * step);
  }
  return (f(t + step) - f(t - step)) / (2.0 * step);
}

/// N(t) + tau dN/dt with a finite-difference derivative; O(step^2).
double ode_residual(const DecayModel& model, double t, double step);

/// T(r, t) = h(r) N(t) with h a polynomial in r.
struct SeparableSolution {
  Eigen::VectorXd spatial;  // h(r) = sum_i spatial[i] r^i
  DecayModel temporal;
  double k = -1.0;

  /// h(r) = 0 r^2 + 1 and k = -tau.
  static SeparableSolution constant_spatial(const DecayModel& model);

  double h(double r) const;
  double value(double r, double t) const { return h(r) * population(temporal, t); }
};

/// D acts as the identity through h only, so D(T)(r, t) = h(r) N(t). The check
/// passes when D(T) reproduces the decay measure 1 * N(t) and equals
/// k dT/dt (finite difference), both within tolerance.
bool operator_check(const SeparableSolution& sol, double r, double t,
                    double tolerance = kDerivativeTolerance);

/// tau_m = tau_s / gamma. Requires d = 0.
double dilated_lifetime(double tau_s, const LineElementParams<double>& p);

/// Checks N(t^s) == N_bar(t^m) == (-tau_s / gamma) dN_bar/dt^m at t^m = t^s / gamma,
/// where N_bar decays with tau_m (default tau_s / gamma).
bool chain_rule_check(double tau_s, const LineElementParams<double>& p, double t_probe,
                      std::optional<double> tau_m_override = std::nullopt,
                      double tolerance = kDerivativeTolerance);

/// Keyed uniform draw in [0, 1): a pure function of (seed, stream, index).
double uniform_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

double pairwise_sum(std::span<const double> values);

struct EnsembleRun {
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  std::vector<double> lifetimes;
  double tau_hat = 0.0;
  double std_error = 0.0;  // tau_hat / sqrt(M)
};

/// M inverse-CDF exponential lifetimes. Bit-identical for any thread count
/// (threads == 0 picks the hardware concurrency).
EnsembleRun run_ensemble(double tau, std::size_t sample_count, std::uint64_t seed,
                         unsigned threads = 0, std::uint64_t stream = 0);

struct FrameComparison {
  double tau_s = 0.0;
  double v = 0.0;
  double c = 1.0;
  double lambda = 1.0;
  double gamma = 1.0;
  double tau_m_analytic = 0.0;
  double tau_hat_s = 0.0;
  double tau_hat_m = 0.0;
  double ratio = 0.0;
  double ratio_std_error = 0.0;
  double z_score = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Independent ensembles at tau_s and tau_s / gamma; z-score of the lifetime
/// ratio against 1 / gamma.
FrameComparison compare_frames(double tau_s, const LineElementParams<double>& p,
                               std::size_t sample_count, std::uint64_t seed, unsigned threads = 0,
                               double tau_bound = kDefaultLifetimeBound);

}  // namespace lightclock
