#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "cnls/functionals.hpp"

#include <cmath>
#include <algorithm>
#include <numbers>

#include "cnls/errors.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace cnls;
using cnls::testing::random_localized_field;
using cnls::testing::sample_field;

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

FieldPair gaussian_pair(const Grid& g, double a, double sigma, double b, double tau) {
  FieldPair s = make_pair(g);
  s.phi = sample_field(g, [&](double x) { return a * std::exp(-x * x / (2 * sigma * sigma)); });
  s.psi = sample_field(g, [&](double x) { return b * std::exp(-x * x / (2 * tau * tau)); });
  return s;
}

FieldPair random_pair(const Grid& g, std::uint64_t seed) {
  return FieldPair{random_localized_field(g, seed), random_localized_field(g, seed + 1000)};
}
}  // namespace

TEST_CASE("mass_pair on zero and Gaussian data") {
  Grid g = make_grid(1, 256, 16.0);
  FieldPair zero = make_pair(g);
  auto [m0, m1] = mass_pair(zero);
  CHECK(m0 == 0.0);
  CHECK(m1 == 0.0);

  FieldPair s = make_pair(g);
  s.phi = sample_field(g, [](double x) { return std::exp(-x * x / 2.0); });
  auto [mphi, mpsi] = mass_pair(s);
  CHECK(std::abs(mphi - kSqrtPi) < 1e-12);
  CHECK(mpsi == 0.0);
}

TEST_CASE("mass scaling under scale_pair") {
  Grid g = make_grid(1, 256, 24.0);
  FieldPair s = gaussian_pair(g, 1.0, 1.0, 0.6, 0.8);
  auto [m0phi, m0psi] = mass_pair(s);
  const ScalingParams sc{1.4, 1.2};
  FieldPair scaled = scale_pair(s, sc);
  auto [mphi, mpsi] = mass_pair(scaled);
  const double factor = sc.mu * sc.mu / sc.lambda;  // mu^2 lambda^{-n}, n=1
  CHECK(mphi == doctest::Approx(factor * m0phi).epsilon(1e-9));
  CHECK(mpsi == doctest::Approx(factor * m0psi).epsilon(1e-9));
}

TEST_CASE("coupling_K special cases and symmetry") {
  Grid g = make_grid(1, 128, 16.0);
  PhysParams P{1, 1.0, 0.7};
  FieldPair s = make_pair(g);
  s.phi = random_localized_field(g, 3);
  const double u4 = lp_power(s.phi, 4.0);
  CHECK(coupling_K(s, P) == doctest::Approx(u4).epsilon(1e-13));

  FieldPair eq = make_pair(g);
  eq.phi = s.phi;
  eq.psi = s.phi;
  CHECK(coupling_K(eq, P) == doctest::Approx(2.0 * (1.0 + P.beta) * u4).epsilon(1e-13));

  FieldPair r = random_pair(g, 11);
  FieldPair swapped{r.psi, r.phi};
  CHECK(coupling_K(r, P) == doctest::Approx(coupling_K(swapped, P)).epsilon(1e-13));
}

TEST_CASE("energy: zero pair, decoupling, swap symmetry") {
  Grid g = make_grid(1, 128, 16.0);
  PhysParams P{1, 1.0, 2.0};
  CHECK(energy(make_pair(g), P) == 0.0);

  FieldPair s = make_pair(g);
  s.phi = random_localized_field(g, 5);
  PhysParams Pb = P;
  Pb.beta = 17.0;
  CHECK(energy(s, P) == doctest::Approx(energy(s, Pb)).epsilon(1e-15));
  const double expected = 0.5 * gradient_norm_sq(s.phi) - lp_power(s.phi, 4.0) / 4.0;
  CHECK(energy(s, P) == doctest::Approx(expected).epsilon(1e-13));

  FieldPair r = random_pair(g, 21);
  FieldPair swapped{r.psi, r.phi};
  CHECK(energy(r, P) == doctest::Approx(energy(swapped, P)).epsilon(1e-12));
}

TEST_CASE("gn_quotient_J scaling invariance and beta independence on scalar pairs") {
  Grid g = make_grid(1, 256, 24.0);
  PhysParams P{1, 1.0, 1.5};
  FieldPair s = gaussian_pair(g, 1.0, 1.0, 0.5, 1.3);
  const double J0 = gn_quotient_J(s, P);

  for (ScalingParams sc : {ScalingParams{1.7, 1.0}, ScalingParams{1.0, 1.25}, ScalingParams{0.8, 0.85}}) {
    FieldPair scaled = scale_pair(s, sc);
    CHECK(gn_quotient_J(scaled, P) == doctest::Approx(J0).epsilon(1e-6));
  }

  FieldPair scalar = make_pair(g);
  scalar.phi = s.phi;
  PhysParams Pb = P;
  Pb.beta = 40.0;
  CHECK(gn_quotient_J(scalar, P) == doctest::Approx(gn_quotient_J(scalar, Pb)).epsilon(1e-15));

  CHECK_THROWS_AS(gn_quotient_J(make_pair(g), P), numerics_error);
}

TEST_CASE("action and Nehari residual around the closed-form projection") {
  Grid g = make_grid(1, 256, 24.0);
  PhysParams P{1, 1.0, 1.0};
  CHECK(action_I(make_pair(g), P) == 0.0);

  FieldPair s = gaussian_pair(g, 0.9, 1.1, 0.7, 0.9);
  const double A = h1_quadratic_form(s, P);
  const double K = coupling_K(s, P);
  const double scale = std::pow(A / K, 1.0 / (2.0 * P.p));
  FieldPair on_manifold = s;
  for (cplx& v : on_manifold.phi.samples) v *= scale;
  for (cplx& v : on_manifold.psi.samples) v *= scale;

  const double Am = h1_quadratic_form(on_manifold, P);
  CHECK(std::abs(nehari_residual(on_manifold, P)) < 1e-12 * Am);
  // On the manifold I reduces to p/(2p+2) times the quadratic form.
  CHECK(action_I(on_manifold, P) ==
        doctest::Approx(P.p / (2.0 * P.p + 2.0) * Am).epsilon(1e-12));

  // s -> 0+ leaves the quadratic term dominant: positive residual.
  FieldPair small = s;
  for (cplx& v : small.phi.samples) v *= 1e-3;
  for (cplx& v : small.psi.samples) v *= 1e-3;
  CHECK(nehari_residual(small, P) > 0.0);

  CHECK_THROWS_AS(nehari_residual(make_pair(g), P), numerics_error);
}

TEST_CASE("pohozaev_residual against closed-form Gaussian integrals") {
  Grid g = make_grid(1, 256, 24.0);
  PhysParams P{1, 1.0, 0.8};
  const double a = 1.2, sigma = 1.0, b = 0.7, tau = 1.4;
  FieldPair s = gaussian_pair(g, a, sigma, b, tau);

  const double mass_phi = a * a * sigma * kSqrtPi;
  const double mass_psi = b * b * tau * kSqrtPi;
  const double grad_phi = a * a * kSqrtPi / (2.0 * sigma);
  const double grad_psi = b * b * kSqrtPi / (2.0 * tau);
  const double quartic_phi = std::pow(a, 4) * sigma * std::sqrt(kPi / 2.0);
  const double quartic_psi = std::pow(b, 4) * tau * std::sqrt(kPi / 2.0);
  const double cross = a * a * b * b * kSqrtPi / std::sqrt(1.0 / (sigma * sigma) + 1.0 / (tau * tau));
  const double K = quartic_phi + 2.0 * P.beta * cross + quartic_psi;
  const double expected = 0.5 * (P.n - 2.0) * (grad_phi + grad_psi) +
                          0.5 * P.n * (mass_phi + mass_psi) - P.n / (2.0 * P.p + 2.0) * K;

  CHECK(pohozaev_residual(s, P) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(expected != 0.0);
  CHECK(pohozaev_residual(make_pair(g), P) == 0.0);
}

TEST_CASE("variance of Gaussian data and swap symmetry") {
  Grid g = make_grid(1, 256, 16.0);
  FieldPair zero = make_pair(g);
  CHECK(variance(zero) == 0.0);

  FieldPair s = make_pair(g);
  s.phi = sample_field(g, [](double x) { return std::exp(-x * x / 2.0); });
  bool warn = true;
  CHECK(std::abs(variance(s, &warn) - kSqrtPi / 2.0) < 1e-10);
  CHECK_FALSE(warn);

  FieldPair r = random_pair(g, 33);
  FieldPair swapped{r.psi, r.phi};
  CHECK(variance(r) == doctest::Approx(variance(swapped)).epsilon(1e-13));

  // A field touching the boundary layer trips the warning flag.
  FieldPair wide = make_pair(g);
  wide.phi = sample_field(g, [&](double x) { return std::exp(-x * x / 40.0); });
  variance(wide, &warn);
  CHECK(warn);
}

TEST_CASE("variance_rate: real data and chirped Gaussian") {
  Grid g = make_grid(1, 256, 16.0);
  FieldPair real_pair = gaussian_pair(g, 1.0, 1.0, 0.5, 1.2);
  CHECK(std::abs(variance_rate(real_pair)) < 1e-12);

  // phi = exp(-(1+ic) x^2/2): the inward quadratic chirp (c>0) shrinks the
  // variance, so eq. Vprimo evaluates to -2 c sqrt(pi).
  const double c = 0.8;
  FieldPair chirped = make_pair(g);
  chirped.phi = sample_field(g, [&](double x) {
    return std::exp(cplx(-x * x / 2.0, -c * x * x / 2.0));
  });
  CHECK(variance_rate(chirped) == doctest::Approx(-2.0 * c * kSqrtPi).epsilon(1e-10));
}

TEST_CASE("variance_accel: formulas agree, critical case reduces to 16E") {
  Grid g = make_grid(1, 128, 16.0);
  PhysParams P{1, 2.0, 1.3};  // p = 2/n: critical
  FieldPair zero = make_pair(g);
  CHECK(variance_accel(zero, P) == 0.0);

  for (std::uint64_t seed : {101, 202, 303}) {
    FieldPair s = random_pair(g, seed);
    const double accel = variance_accel(s, P);
    CHECK(accel == doctest::Approx(16.0 * energy(s, P)).epsilon(1e-10));

    PhysParams Psub{1, 0.6, 1.3};  // non-critical: both formulas must still agree
    const double a2 = variance_accel(s, Psub);
    const double direct = 8.0 * (gradient_norm_sq(s.phi) + gradient_norm_sq(s.psi)) -
                          4.0 * Psub.n * Psub.p / (Psub.p + 1.0) * coupling_K(s, Psub);
    CHECK(a2 == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("scale_pair: identity, gradient scaling, resolution guard") {
  Grid g = make_grid(1, 256, 24.0);
  FieldPair s = gaussian_pair(g, 1.0, 1.0, 0.4, 0.9);
  FieldPair same = scale_pair(s, ScalingParams{1.0, 1.0});
  double err = 0.0;
  for (std::size_t i = 0; i < s.phi.samples.size(); ++i)
    err = std::max(err, std::abs(same.phi.samples[i] - s.phi.samples[i]));
  CHECK(err < 1e-12);

  const ScalingParams sc{0.9, 1.5};
  FieldPair scaled = scale_pair(s, sc);
  const double expect_grad = sc.mu * sc.mu * sc.lambda *  // mu^2 lambda^{2-n}, n=1
                             gradient_norm_sq(s.phi);
  CHECK(gradient_norm_sq(scaled.phi) == doctest::Approx(expect_grad).epsilon(1e-8));

  // Extreme compression pushes energy past the Nyquist band.
  CHECK_THROWS_AS(scale_pair(s, ScalingParams{1.0, 60.0}), numerics_error);
}

TEST_CASE("beta=0 splits all pair functionals additively") {
  Grid g = make_grid(1, 128, 16.0);
  PhysParams P{1, 1.5, 1.0};
  P.beta = 0.0;  // decoupled limit (not reachable through validated configs)
  FieldPair s = random_pair(g, 55);
  FieldPair only_phi{s.phi, make_field(g)};
  FieldPair only_psi{make_field(g), s.psi};

  CHECK(coupling_K(s, P) ==
        doctest::Approx(coupling_K(only_phi, P) + coupling_K(only_psi, P)).epsilon(1e-13));
  CHECK(energy(s, P) ==
        doctest::Approx(energy(only_phi, P) + energy(only_psi, P)).epsilon(1e-12));
  CHECK(action_I(s, P) ==
        doctest::Approx(action_I(only_phi, P) + action_I(only_psi, P)).epsilon(1e-12));
  CHECK(variance(s) ==
        doctest::Approx(variance(only_phi) + variance(only_psi)).epsilon(1e-13));
}

TEST_CASE("swap symmetry of J and I at equal frequencies") {
  Grid g = make_grid(1, 128, 16.0);
  PhysParams P{1, 1.0, 2.5};
  FieldPair r = random_pair(g, 77);
  FieldPair swapped{r.psi, r.phi};
  CHECK(gn_quotient_J(r, P) == doctest::Approx(gn_quotient_J(swapped, P)).epsilon(1e-12));
  CHECK(action_I(r, P) == doctest::Approx(action_I(swapped, P)).epsilon(1e-12));
}

TEST_CASE("diagnostics CSV contract") {
  CHECK(diagnostics_csv_header() ==
        "t,mass_phi,mass_psi,grad_phi_sq,grad_psi_sq,energy,coupling_K,variance,"
        "variance_rate,variance_accel,tail_fraction");
  Grid g = make_grid(1, 128, 16.0);
  PhysParams P{1, 1.0, 1.0};
  FieldPair s = gaussian_pair(g, 0.5, 1.0, 0.3, 1.1);
  DiagnosticsRecord r = diagnostics(s, P, 0.25);
  CHECK(r.finite());
  CHECK(r.t == 0.25);
  CHECK(r.mass_phi > 0.0);
  const std::string row = diagnostics_csv_row(r);
  CHECK(std::count(row.begin(), row.end(), ',') == 10);
}

TEST_CASE("PhysParams criticality flags") {
  PhysParams sub{1, 0.5, 1.0};
  CHECK(sub.is_subcritical());
  PhysParams crit{2, 1.0, 1.0};
  CHECK(crit.is_critical());
  PhysParams super{3, 1.0, 1.0};
  CHECK(super.is_supercritical());
  CHECK(super.supercritical_limit() == doctest::Approx(2.0));
  CHECK(std::isinf(sub.supercritical_limit()));
  PhysParams bad{1, 1.0, -1.0};
  CHECK_THROWS_AS(bad.validate(), configuration_error);
}
