#include "cnls/blowup.hpp"

#include <cmath>
#include <limits>

#include "cnls/errors.hpp"

namespace cnls {

namespace {

constexpr double kFamilyTailMax = 1e-6;

double radius_sq_at(const Grid& g, std::size_t idx) {
  const int N = g.points;
  double r2 = 0.0;
  std::size_t rem = idx;
  for (int d = g.n - 1; d >= 0; --d) {
    const double x = g.coords[rem % static_cast<std::size_t>(N)];
    rem /= static_cast<std::size_t>(N);
    r2 += x * x;
  }
  return r2;
}

// One chirped component: (1-t)^{-n/2} e^{-i(|x|^2-4w)/(4(1-t))} U(x/(1-t)).
ComplexField family_component(double t, const ComplexField& profile, double omega) {
  const Grid& g = profile.grid;
  const double s = 1.0 - t;
  ComplexField dilated = dilate(profile, 1.0 / s);
  const double amp = std::pow(s, -0.5 * g.n);
  for (std::size_t i = 0; i < dilated.samples.size(); ++i) {
    const double theta = -(radius_sq_at(g, i) - 4.0 * omega) / (4.0 * s);
    dilated.samples[i] *= std::polar(amp, theta);
  }
  return dilated;
}

}  // namespace

FieldPair explicit_blowup_pair(double t, const GroundState& g, double omega1, double omega2) {
  if (!(t >= 0.0) || t >= 1.0) throw configuration_error("past blow-up time: need 0 <= t < 1");
  if (!g.params.is_critical())
    throw configuration_error("explicit blow-up family requires p = 2/n");

  FieldPair out{family_component(t, g.pair.phi, omega1),
                family_component(t, g.pair.psi, omega2)};
  for (const ComplexField* f : {&out.phi, &out.psi}) {
    if (mass(*f) == 0.0) continue;
    if (spectral_tail_fraction(*f) > kFamilyTailMax)
      throw numerics_error("blow-up family under-resolved at t = " + std::to_string(t));
  }
  return out;
}

FieldPair explicit_blowup_pair(double t, const GroundState& g) {
  return explicit_blowup_pair(t, g, g.params.omega1, g.params.omega2);
}

double explicit_blowup_residual_max(double t, const GroundState& g, double omega1,
                                    double omega2) {
  if (!(t >= 0.0) || t >= 1.0) throw configuration_error("past blow-up time: need 0 <= t < 1");
  const Grid& grid = g.pair.grid();
  const int n = grid.n;
  const double s = 1.0 - t;
  const double p = g.params.p;
  const double beta = g.params.beta;

  FieldPair pair = explicit_blowup_pair(t, g, omega1, omega2);
  FieldPair lap{laplacian(pair.phi), laplacian(pair.psi)};

  // i dt Phi = s^{-n/2} e^{i theta} [ i n/(2s) U(y) + (|x|^2-4w)/(4 s^2) U(y)
  //                                   + (i/s) (y . grad U)(y) ],  y = x/s
  const auto time_term = [&](const ComplexField& profile, double omega) {
    ComplexField dilated = dilate(profile, 1.0 / s);
    ComplexField radial = make_field(grid);  // (y . grad U)(y)
    const int N = grid.points;
    for (int axis = 0; axis < n; ++axis) {
      ComplexField dgrad = dilate(gradient_component(profile, axis), 1.0 / s);
      std::size_t stride = 1;
      for (int d = n - 1; d > axis; --d) stride *= static_cast<std::size_t>(N);
      for (std::size_t i = 0; i < radial.samples.size(); ++i) {
        const double y = grid.coords[(i / stride) % static_cast<std::size_t>(N)] / s;
        radial.samples[i] += y * dgrad.samples[i];
      }
    }
    const double amp = std::pow(s, -0.5 * n);
    ComplexField out = make_field(grid);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      const double r2 = radius_sq_at(grid, i);
      const double theta = -(r2 - 4.0 * omega) / (4.0 * s);
      const cplx bracket = cplx(0.0, 0.5 * n / s) * dilated.samples[i] +
                           (r2 - 4.0 * omega) / (4.0 * s * s) * dilated.samples[i] +
                           cplx(0.0, 1.0 / s) * radial.samples[i];
      out.samples[i] = std::polar(amp, theta) * bracket;
    }
    return out;
  };

  ComplexField it_phi = time_term(g.pair.phi, omega1);
  ComplexField it_psi = time_term(g.pair.psi, omega2);

  double worst = 0.0;
  for (std::size_t i = 0; i < pair.phi.samples.size(); ++i) {
    const double au = std::abs(pair.phi.samples[i]);
    const double av = std::abs(pair.psi.samples[i]);
    const double cu =
        std::pow(au, 2.0 * p) +
        (au > 0.0 ? beta * std::pow(au, p - 1.0) * std::pow(av, p + 1.0) : 0.0);
    const double cv =
        std::pow(av, 2.0 * p) +
        (av > 0.0 ? beta * std::pow(av, p - 1.0) * std::pow(au, p + 1.0) : 0.0);
    const cplx ru = it_phi.samples[i] + lap.phi.samples[i] + cu * pair.phi.samples[i];
    const cplx rv = it_psi.samples[i] + lap.psi.samples[i] + cv * pair.psi.samples[i];
    worst = std::max({worst, std::abs(ru), std::abs(rv)});
  }
  return worst;
}

double explicit_blowup_residual_max(double t, const GroundState& g) {
  return explicit_blowup_residual_max(t, g, g.params.omega1, g.params.omega2);
}

BlowupCertificate virial_certificate(const FieldPair& s0, const PhysParams& P) {
  BlowupCertificate cert;
  cert.energy = energy(s0, P);
  cert.v0 = variance(s0);
  cert.v1 = variance_rate(s0);
  cert.t_upper = std::numeric_limits<double>::infinity();

  if (!P.is_critical()) {
    cert.note = "not applicable: p != 2/n, V'' = 16E does not close";
    return cert;
  }
  if (!(cert.energy < 0.0)) {
    cert.note = "not applicable: E >= 0, the virial quadratic need not vanish";
    return cert;
  }
  cert.applicable = true;
  // least positive root of 8E t^2 + V'(0) t + V(0), with 8E < 0 and V(0) > 0
  const double disc = cert.v1 * cert.v1 - 32.0 * cert.energy * cert.v0;
  cert.t_upper = (cert.v1 + std::sqrt(disc)) / (-16.0 * cert.energy);
  cert.note = "V(t) = V0 + V1 t + 8E t^2 vanishes by t_upper; existence time is bounded by it";
  return cert;
}

std::pair<double, double> mass_trap_check(const ComplexField& f) {
  const Grid& g = f.grid;
  const double lhs = mass(f);
  if (lhs == 0.0) return {0.0, 0.0};
  double xsq = 0.0;
  for (std::size_t i = 0; i < f.samples.size(); ++i)
    xsq += radius_sq_at(g, i) * std::norm(f.samples[i]);
  xsq *= g.cell_volume();
  const double rhs = (2.0 / g.n) * std::sqrt(xsq) * std::sqrt(gradient_norm_sq(f));
  return {lhs, rhs};
}

}  // namespace cnls
