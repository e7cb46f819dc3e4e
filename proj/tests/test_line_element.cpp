#include <doctest.h>

#include <cmath>
#include <random>

#include "lightclock/line_element.hpp"

using namespace lightclock;
using doctest::Approx;

namespace {

using Params = LineElementParams<double>;

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Config;
}

// Pull-back of the s-frame metric diag(1, -1) on (dT, dr) through (A)/(B),
// computed as M^T G M; independent of the closed-form expansion.
template <FieldScalar Scalar>
QuadraticCoeffs<Scalar> pullback_oracle(const Scalar& alpha, const Scalar& beta) {
  // transform_matrix acts on (dr, dT); reorder into (dT, dr)
  Eigen::Matrix<Scalar, 2, 2> m;
  m << Scalar(1), beta,
       Scalar(-alpha), Scalar(1) - alpha * beta;
  Eigen::Matrix<Scalar, 2, 2> g = Eigen::Matrix<Scalar, 2, 2>::Zero();
  g(0, 0) = Scalar(1);
  g(1, 1) = Scalar(-1);
  const Eigen::Matrix<Scalar, 2, 2> pulled = m.transpose() * g * m;
  return {pulled(0, 0), Scalar(Scalar(2) * pulled(0, 1)), pulled(1, 1)};
}

}  // namespace

TEST_CASE("lambda and gamma factors") {
  CHECK(lambda_factor(Params{0, 0, 1}) == 1.0);
  CHECK(lambda_factor(Params{0.6, 0, 1}) == Approx(0.64).epsilon(1e-15));
  CHECK(lambda_factor(Params{0.6, 0.2, 1}) == Approx(0.36).epsilon(1e-15));
  CHECK(gamma_factor(Params{0, 0, 1}) == 1.0);
  CHECK(gamma_factor(Params{0.6, 0, 1}) == Approx(0.8).epsilon(1e-15));
  CHECK(gamma_factor(Params{0.8, 0, 1}) == Approx(0.6).epsilon(1e-15));

  CHECK(kind_of([] { lambda_factor(Params{1.0, 0, 1}); }) == ErrorKind::Superluminal);
  CHECK(kind_of([] { lambda_factor(Params{0.7, 0.4, 1}); }) == ErrorKind::Superluminal);
  CHECK(kind_of([] { gamma_factor(Params{2.0, 0, 1}); }) == ErrorKind::Superluminal);
  CHECK(kind_of([] { lambda_factor(Params{-0.2, 0, 1}); }) == ErrorKind::Parameter);
  CHECK(kind_of([] { lambda_factor(Params{0.2, 0, 0}); }) == ErrorKind::Parameter);
}

TEST_CASE("exact lambda over rationals") {
  LineElementParams<Rational> p{Rational(3, 5), Rational(0), Rational(1)};
  CHECK(lambda_factor(p) == Rational(16, 25));
  CHECK(gamma_factor(p) == Rational(4, 5));
  // 1 - (1/3)^2 = 8/9 has no rational root
  CHECK_THROWS_AS(gamma_factor(LineElementParams<Rational>{Rational(1, 3), Rational(0), Rational(1)}), Error);
}

TEST_CASE("photon Galilean split") {
  {
    auto split = photon_galilean_split(0.0, 0.0, 1.0, Hyper::infinitesimal(1.0));
    CHECK(split.dR == Hyper(2));
    CHECK(split.dT == Hyper::infinitesimal(1.0));
    CHECK(split.ratio == 0.0);
  }
  {
    auto split = photon_galilean_split(0.6, 0.0, 1.0, Hyper::infinitesimal(1.0));
    CHECK(split.dR[1] == Approx(0.6));
    CHECK(split.dT[1] == 1.0);
    CHECK(split.ratio == Approx(0.6));
  }
  {
    const Hyper dts = Hyper::infinitesimal(2.0);
    auto split = photon_galilean_split(0.3, 0.3, 2.0, dts);
    CHECK(split.dR[1] == Approx(1.2));
    CHECK(split.dT[1] == 4.0);
    CHECK(split.ratio == Approx(0.3));
    CHECK(dts * ((0.3 + 0.3) + 2.0) == split.dR + split.dT);
  }
  CHECK(kind_of([] { photon_galilean_split(0.5, 0.0, 1.0, Hyper(2)); }) == ErrorKind::DivisionUndefined);
  CHECK(kind_of([] { photon_galilean_split(0.5, 0.0, 1.0, Hyper::constant(1.0)); }) == ErrorKind::Parameter);
}

TEST_CASE("transform coefficients") {
  auto identity = solve_transform_coeffs(1.0);
  CHECK(identity.alpha == 0.0);
  CHECK(identity.beta == 0.0);

  auto c64 = solve_transform_coeffs(0.64);
  CHECK(c64.alpha == Approx(-0.6).epsilon(1e-15));
  CHECK(c64.beta == Approx(0.9375).epsilon(1e-15));

  auto c36 = solve_transform_coeffs(0.36);
  CHECK(c36.alpha == Approx(-0.8).epsilon(1e-15));
  CHECK(c36.beta == Approx(0.8 / 0.36).epsilon(1e-15));

  CHECK(kind_of([] { solve_transform_coeffs(0.0); }) == ErrorKind::Domain);
  CHECK(kind_of([] { solve_transform_coeffs(1.5); }) == ErrorKind::Domain);

  auto exact = solve_transform_coeffs(Rational(16, 25));
  CHECK(exact.alpha == Rational(-3, 5));
  CHECK(exact.beta == Rational(15, 16));
  CHECK_THROWS_AS(solve_transform_coeffs(Rational(1, 2)), Error);
}

TEST_CASE("rejected branch") {
  auto d64 = check_rejected_branch(0.64);
  CHECK(d64.ratio == Approx(-0.6));
  CHECK(d64.rejected);
  auto d36 = check_rejected_branch(0.36);
  CHECK(d36.ratio == Approx(-0.8));
  CHECK(d36.rejected);
  auto d1 = check_rejected_branch(1.0);
  CHECK(d1.ratio == 0.0);
  CHECK(d1.branches_coincide);
  CHECK_FALSE(d1.rejected);
}

TEST_CASE("quadratic expansion") {
  auto id = expand_quadratic(0.0, 0.0);
  CHECK(id.dT2 == 1.0);
  CHECK(id.cross == 0.0);
  CHECK(id.dr2 == -1.0);

  auto solved = expand_quadratic(-0.6, 0.9375);
  CHECK(solved.dT2 == Approx(0.64));
  CHECK(std::abs(solved.cross) <= 1e-15);
  CHECK(solved.dr2 == Approx(-1.5625));

  auto unsolved = expand_quadratic(-0.6, 0.0);
  CHECK(unsolved.dT2 == Approx(0.64));
  CHECK(unsolved.cross == Approx(-1.2));
  CHECK(unsolved.dr2 == -1.0);
}

TEST_CASE("closed-form expansion matches the matrix pull-back exactly") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 25);
  for (int i = 0; i < 200; ++i) {
    const Rational alpha(num(rng), den(rng));
    const Rational beta(num(rng), den(rng));
    const auto closed = expand_quadratic(alpha, beta);
    const auto oracle = pullback_oracle(alpha, beta);
    CHECK(closed.dT2 == oracle.dT2);
    CHECK(closed.cross == oracle.cross);
    CHECK(closed.dr2 == oracle.dr2);
  }
}

TEST_CASE("transform differentials") {
  const auto c64 = solve_transform_coeffs(0.64);
  {
    auto [drs, dTs] = transform_differentials(c64, Hyper(2), Hyper::infinitesimal(1.0));
    CHECK(drs[1] == Approx(0.6));
    CHECK(dTs[1] == Approx(1.0));
  }
  {
    auto [drs, dTs] = transform_differentials(solve_transform_coeffs(1.0), Hyper::infinitesimal(1.0),
                                              Hyper::infinitesimal(1.0));
    CHECK(drs == Hyper::infinitesimal(1.0));
    CHECK(dTs == Hyper::infinitesimal(1.0));
  }
  {
    auto [drs, dTs] = transform_differentials(c64, Hyper::infinitesimal(1.0), Hyper(2));
    CHECK(drs[1] == Approx(1.5625));
    CHECK(dTs[1] == Approx(0.9375));
  }
  CHECK_THROWS_AS(transform_differentials(c64, Hyper(1), Hyper(2)), Error);
}

TEST_CASE("velocity ratio") {
  const auto c64 = solve_transform_coeffs(0.64);
  CHECK(velocity_ratio(c64, 0.0) == Approx(0.6));
  CHECK(velocity_ratio(solve_transform_coeffs(1.0), 0.3) == Approx(0.3));
  CHECK(velocity_ratio(c64, 0.6) == Approx(0.984));
  // pole where (sqrt(1-eta)/eta) x = -1
  CHECK(kind_of([&] { velocity_ratio(TransformCoeffs<double>{-0.5, 0.5, 0.5}, -1.0); }) == ErrorKind::Pole);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> eta(0.01, 1.0), x(-0.5, 0.5);
  for (int i = 0; i < 200; ++i) {
    const auto c = solve_transform_coeffs(eta(rng));
    const double xi = x(rng);
    CHECK(velocity_ratio(c, xi) == Approx(branch_velocity_ratio(c.alpha, c.beta, xi)).epsilon(1e-12));
  }
}

TEST_CASE("line elements") {
  const Hyper eps = Hyper::infinitesimal(1.0);
  const Hyper zero(2);
  CHECK(line_element_s(Displacement<double>{zero, eps, Frame::S}, 1.0) == Hyper::infinitesimal(1.0, 2));
  CHECK(line_element_s(Displacement<double>{eps, eps, Frame::S}, 1.0) == zero);
  CHECK(line_element_s(Displacement<double>{eps, eps * 2.0, Frame::S}, 1.0) == Hyper::infinitesimal(3.0, 2));

  const Params rest{0, 0, 1};
  const Params moving{0.6, 0, 1};
  CHECK(line_element_m(Displacement<double>{zero, eps, Frame::M}, rest) == Hyper::infinitesimal(1.0, 2));
  CHECK(line_element_m(Displacement<double>{zero, eps, Frame::M}, moving)[2] == Approx(0.64));
  CHECK(line_element_m(Displacement<double>{eps, zero, Frame::M}, moving)[2] == Approx(-1.5625));

  CHECK(kind_of([&] { line_element_s(Displacement<double>{eps, eps, Frame::M}, 1.0); }) == ErrorKind::Frame);
  CHECK(kind_of([&] { line_element_m(Displacement<double>{eps, eps, Frame::S}, rest); }) == ErrorKind::Frame);
  CHECK(kind_of([&] { line_element_m(Displacement<double>{eps, eps, Frame::M}, Params{1.0, 0, 1}); }) ==
        ErrorKind::Superluminal);
}

TEST_CASE("transformed s-frame interval reproduces the m-frame line element") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> eta_dist(1e-3, 1.0), coef(-1.0, 1.0), cdist(0.5, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double eta = eta_dist(rng);
    const double c = cdist(rng);
    const auto coeffs = solve_transform_coeffs(eta);
    const Hyper drm = Hyper::infinitesimal(coef(rng));
    const Hyper dtm = Hyper::infinitesimal(coef(rng));
    const auto [drs, dTs] = transform_differentials(coeffs, drm, dtm * c);
    const auto lhs = line_element_s(Displacement<double>{drs, dTs * (1.0 / c), Frame::S}, c);
    const auto rhs = line_element_m(Displacement<double>{drm, dtm, Frame::M}, c, eta);
    const double scale = std::max({std::abs(rhs[2]), std::abs(eta * c * c * dtm[1] * dtm[1]),
                                   std::abs(drm[1] * drm[1] / eta)});
    CHECK(std::abs(lhs[2] - rhs[2]) <= 1e-12 * scale);

    const auto quad = expand_quadratic(coeffs.alpha, coeffs.beta);
    CHECK(std::abs(quad.cross) <= 1e-12);
    CHECK(quad.dT2 == Approx(eta).epsilon(1e-12));
    CHECK(quad.dr2 == Approx(-1.0 / eta).epsilon(1e-12));
  }
}

TEST_CASE("time-reversal symmetry and the lambda = 1 reduction") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> coef(-1.0, 1.0), v(0.0, 0.95);
  for (int i = 0; i < 200; ++i) {
    const Hyper dr = Hyper::infinitesimal(coef(rng));
    const Hyper dt = Hyper::infinitesimal(coef(rng));
    const Params p{v(rng), 0.0, 1.0};
    CHECK(line_element_m(Displacement<double>{dr, dt, Frame::M}, p) ==
          line_element_m(Displacement<double>{dr, -dt, Frame::M}, p));
    CHECK(line_element_m(Displacement<double>{dr, dt, Frame::M}, Params{0, 0, 1}) ==
          line_element_s(Displacement<double>{dr, dt, Frame::S}, 1.0));
  }
}

TEST_CASE("stationary m-point fixes eta to lambda") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 0.99);
  for (int i = 0; i < 200; ++i) {
    const double v = u(rng) * 0.6;
    const double d = u(rng) * 0.4;
    const Params p{v, d, 1.0};
    const auto coeffs = solve_transform_coeffs(lambda_factor(p));
    CHECK(velocity_ratio(coeffs, 0.0) == Approx(v + d).epsilon(1e-12));
  }
}

TEST_CASE("time dilation relation") {
  const Hyper eps = Hyper::infinitesimal(1.0);
  CHECK(time_dilation_relation(Params{0, 0, 1}, eps) == eps);
  CHECK(time_dilation_relation(Params{0.6, 0, 1}, eps)[1] == Approx(0.8));
  CHECK(time_dilation_relation(Params{0.6, 0, 1}, -eps)[1] == Approx(-0.8));
}

TEST_CASE("velocity map values") {
  CHECK(nsppm_velocity(0.0, 1.0) == 0.0);
  CHECK(nsppm_velocity(0.6, 1.0) == Approx(0.37688590118819007).epsilon(1e-14));
  CHECK(nsppm_velocity(0.99, 1.0) == Approx(2.3000914478666511).epsilon(1e-13));
  CHECK(nsppm_velocity(-0.3, 1.0) == nsppm_velocity(0.3, 1.0));
  CHECK(nsppm_velocity(0.3, 1.0) == Approx(0.090244187856146830).epsilon(1e-14));
  // (c/2) ln((1 + v^2/c^2) / (1 - v^2/c^2)) with c != 1
  CHECK(nsppm_velocity(1.2, 2.0) == Approx(2.0 * 0.37688590118819007).epsilon(1e-14));
  CHECK(standard_rapidity(0.6, 1.0) == Approx(0.69314718055994531).epsilon(1e-14));
  CHECK(kind_of([] { nsppm_velocity(1.0, 1.0); }) == ErrorKind::Domain);
}

TEST_CASE("velocity map is strictly increasing and unbounded toward c") {
  double prev = -1.0;
  for (int k = 1; k <= 6; ++k) {
    const double w = nsppm_velocity(1.0 - std::pow(10.0, -k), 1.0);
    CHECK(w > prev);
    prev = w;
  }
  CHECK(prev == Approx(6.9077550289821996).epsilon(1e-9));
}

TEST_CASE("additive composition") {
  CHECK(compose_velocities_additive_w(0.0, 0.5, 1.0) == Approx(0.5).epsilon(1e-12));
  // closed-form inverse v = c sqrt(tanh(w / c)), 40-digit oracle value
  CHECK(compose_velocities_additive_w(0.5, 0.5, 1.0) == Approx(0.68599434057003535).epsilon(1e-12));
  CHECK(nsppm_velocity(0.3, 1.0) + nsppm_velocity(-0.3, 1.0) == 2.0 * nsppm_velocity(0.3, 1.0));
  CHECK(kind_of([] { compose_velocities_additive_w(0.9999999, 0.9999999, 1.0); }) == ErrorKind::Domain);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> v(0.0, 0.999);
  for (int i = 0; i < 200; ++i) {
    const double a = v(rng);
    CHECK(std::abs(compose_velocities_additive_w(a, 0.0, 1.0) - a) <= 1e-10);
    const double b = v(rng) * 0.5;
    const double w = nsppm_velocity(a * 0.5, 1.0) + nsppm_velocity(b, 1.0);
    CHECK(compose_velocities_additive_w(a * 0.5, b, 1.0) == Approx(std::sqrt(std::tanh(w))).epsilon(1e-10));
  }
}
