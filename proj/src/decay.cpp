#include "lightclock/decay.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace lightclock {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void require_lifetime(double tau, double bound) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorKind::Domain, "lifetime tau must be positive");
  if (tau > bound) throw Error(ErrorKind::Domain, "lifetime tau exceeds the configured bound B");
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

DecayModel::DecayModel(double n0_, double tau_, Frame frame_, double tau_bound_)
    : n0(n0_), tau(tau_), frame(frame_), tau_bound(tau_bound_) {
  if (!(n0 > 0.0) || !std::isfinite(n0)) throw Error(ErrorKind::Domain, "initial population must be positive");
  require_lifetime(tau, tau_bound);
}

double population(const DecayModel& model, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::Domain, "population is defined for t >= 0");
  return model.n0 * std::exp(-t / model.tau);
}

double ode_residual(const DecayModel& model, double t, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::Domain, "finite-difference step must be positive");
  auto n = [&](double s) { return population(model, s); };
  return n(t) + model.tau * time_derivative(n, t, step);
}

SeparableSolution SeparableSolution::constant_spatial(const DecayModel& model) {
  SeparableSolution sol;
  sol.spatial = Eigen::Vector3d(1.0, 0.0, 0.0);
  sol.temporal = model;
  sol.k = -model.tau;
  return sol;
}

double SeparableSolution::h(double r) const {
  double acc = 0.0;
  for (Eigen::Index i = spatial.size() - 1; i >= 0; --i) acc = acc * r + spatial(i);
  return acc;
}

bool operator_check(const SeparableSolution& sol, double r, double t, double tolerance) {
  const double step = kFiniteDifferenceStep * sol.temporal.tau;
  const double applied = sol.h(r) * population(sol.temporal, t);  // D(h) N
  const double measured = 1.0 * population(sol.temporal, t);
  const double dT_dt = time_derivative([&](double s) { return sol.value(r, s); }, t, step);
  return std::abs(applied - measured) <= tolerance &&
         std::abs(applied - sol.k * dT_dt) <= tolerance;
}

double dilated_lifetime(double tau_s, const LineElementParams<double>& p) {
  require_lifetime(tau_s, kDefaultLifetimeBound);
  if (p.d != 0.0) throw Error(ErrorKind::Parameter, "decay lifetimes use d = 0");
  return tau_s / gamma_factor(p);
}

bool chain_rule_check(double tau_s, const LineElementParams<double>& p, double t_probe,
                      std::optional<double> tau_m_override, double tolerance) {
  const double gamma = gamma_factor(p);
  const double tau_m = tau_m_override.value_or(dilated_lifetime(tau_s, p));
  const DecayModel lab(1.0, tau_s, Frame::S);
  const DecayModel moving(1.0, tau_m, Frame::M);

  const double ts = t_probe;
  const double tm = ts / gamma;  // gamma dt^m = dt^s
  const double n_s = population(lab, ts);
  const double n_m = population(moving, tm);
  const double dnm_dtm = time_derivative([&](double s) { return population(moving, s); }, tm,
                                         kFiniteDifferenceStep * tau_m);
  const double rhs = (-tau_s / gamma) * dnm_dtm;
  return relative_gap(n_s, n_m) <= tolerance && relative_gap(n_s, rhs) <= tolerance;
}

double uniform_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const std::uint64_t key = mix64(mix64(seed) ^ (stream * kGolden + 0x632be59bd9b4e019ULL));
  const std::uint64_t bits = mix64(key + (index + 1) * kGolden);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double acc = 0.0;
    for (double x : values) acc += x;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

EnsembleRun run_ensemble(double tau, std::size_t sample_count, std::uint64_t seed, unsigned threads,
                         std::uint64_t stream) {
  require_lifetime(tau, kDefaultLifetimeBound);
  if (sample_count == 0) throw Error(ErrorKind::Domain, "ensemble needs at least one sample");

  EnsembleRun run;
  run.sample_count = sample_count;
  run.seed = seed;
  run.lifetimes.resize(sample_count);

  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double u = uniform_draw(seed, stream, i);
      run.lifetimes[i] = -tau * std::log1p(-u);
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, sample_count));
  if (workers <= 1) {
    fill(0, sample_count);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (sample_count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(sample_count, w * chunk);
      const std::size_t end = std::min(sample_count, begin + chunk);
      pool.emplace_back(fill, begin, end);
    }
  }

  run.tau_hat = pairwise_sum(run.lifetimes) / static_cast<double>(sample_count);
  run.std_error = run.tau_hat / std::sqrt(static_cast<double>(sample_count));
  return run;
}

FrameComparison compare_frames(double tau_s, const LineElementParams<double>& p,
                               std::size_t sample_count, std::uint64_t seed, unsigned threads,
                               double tau_bound) {
  require_lifetime(tau_s, tau_bound);
  FrameComparison out;
  out.tau_s = tau_s;
  out.v = p.v;
  out.c = p.c;
  out.lambda = lambda_factor(p);
  out.gamma = gamma_factor(p);
  out.tau_m_analytic = dilated_lifetime(tau_s, p);
  require_lifetime(out.tau_m_analytic, tau_bound);
  out.samples = sample_count;
  out.seed = seed;

  const EnsembleRun lab = run_ensemble(tau_s, sample_count, seed, threads, 0);
  const EnsembleRun moving = run_ensemble(out.tau_m_analytic, sample_count, seed, threads, 1);
  out.tau_hat_s = lab.tau_hat;
  out.tau_hat_m = moving.tau_hat;
  out.ratio = moving.tau_hat / lab.tau_hat;

  const double rel_s = lab.std_error / lab.tau_hat;
  const double rel_m = moving.std_error / moving.tau_hat;
  out.ratio_std_error = out.ratio * std::sqrt(rel_s * rel_s + rel_m * rel_m);
  out.z_score = (out.ratio - 1.0 / out.gamma) / out.ratio_std_error;
  return out;
}

}  // namespace lightclock
