#include "cnls/functionals.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "cnls/errors.hpp"

namespace cnls {

namespace {

constexpr double kBoundaryMassWarn = 1e-6;
constexpr double kScalingTailMax = 1e-6;

// |x|^2 from the box center at flat index idx.
double radius_sq(const Grid& g, std::size_t idx) {
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

bool pair_boundary_warning(const FieldPair& s) {
  const double mphi = mass(s.phi), mpsi = mass(s.psi);
  const double total = mphi + mpsi;
  if (total == 0.0) return false;
  const double edge = boundary_mass_fraction(s.phi) * mphi + boundary_mass_fraction(s.psi) * mpsi;
  return edge / total > kBoundaryMassWarn;
}

}  // namespace

void PhysParams::validate() const {
  if (n < 1 || n > 3) throw configuration_error("dimension n must be 1, 2 or 3");
  if (!(p >= 0.0)) throw configuration_error("nonlinearity power p must be >= 0");
  if (!(beta > 0.0)) throw configuration_error("coupling beta must be positive");
  if (!(omega1 > 0.0) || !(omega2 > 0.0))
    throw configuration_error("frequencies omega1, omega2 must be positive");
}

double PhysParams::supercritical_limit() const {
  return n <= 2 ? std::numeric_limits<double>::infinity() : 2.0 / (n - 2);
}

bool PhysParams::is_critical() const { return std::abs(p - critical_p()) <= 1e-12; }

bool PhysParams::is_supercritical() const {
  return !is_critical() && p > critical_p() && p < supercritical_limit();
}

void FieldPair::check_consistent() const {
  if (!(phi.grid == psi.grid)) throw configuration_error("field pair components on different grids");
}

FieldPair make_pair(const Grid& g) { return FieldPair{make_field(g), make_field(g)}; }

bool DiagnosticsRecord::finite() const {
  for (double v : {t, mass_phi, mass_psi, grad_phi_sq, grad_psi_sq, energy, coupling_K, variance,
                   variance_rate, variance_accel, tail_fraction})
    if (!std::isfinite(v)) return false;
  return true;
}

std::string diagnostics_csv_header() {
  return "t,mass_phi,mass_psi,grad_phi_sq,grad_psi_sq,energy,coupling_K,variance,"
         "variance_rate,variance_accel,tail_fraction";
}

std::string diagnostics_csv_row(const DiagnosticsRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.t,
                r.mass_phi, r.mass_psi, r.grad_phi_sq, r.grad_psi_sq, r.energy, r.coupling_K,
                r.variance, r.variance_rate, r.variance_accel, r.tail_fraction);
  return buf;
}

std::pair<double, double> mass_pair(const FieldPair& s) {
  s.check_consistent();
  return {mass(s.phi), mass(s.psi)};
}

double coupling_K(const FieldPair& s, const PhysParams& P) {
  s.check_consistent();
  const double q = 2.0 * P.p + 2.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < s.phi.samples.size(); ++i) {
    const double au = std::abs(s.phi.samples[i]);
    const double av = std::abs(s.psi.samples[i]);
    sum += std::pow(au, q) + 2.0 * P.beta * std::pow(au * av, P.p + 1.0) + std::pow(av, q);
  }
  return sum * s.grid().cell_volume();
}

double energy(const FieldPair& s, const PhysParams& P) {
  const double grad = gradient_norm_sq(s.phi) + gradient_norm_sq(s.psi);
  return 0.5 * grad - coupling_K(s, P) / (2.0 * P.p + 2.0);
}

double h1_quadratic_form(const FieldPair& s, const PhysParams& P) {
  return gradient_norm_sq(s.phi) + gradient_norm_sq(s.psi) + P.omega1 * mass(s.phi) +
         P.omega2 * mass(s.psi);
}

double gn_quotient_J(const FieldPair& s, const PhysParams& P) {
  const double K = coupling_K(s, P);
  if (K <= 0.0) throw numerics_error("J undefined on trivial pair");
  const double grad = gradient_norm_sq(s.phi) + gradient_norm_sq(s.psi);
  const double wmass = P.omega1 * mass(s.phi) + P.omega2 * mass(s.psi);
  const double a = P.p * P.n / 2.0;
  return std::pow(grad, a) * std::pow(wmass, P.p + 1.0 - a) / K;
}

double action_I(const FieldPair& s, const PhysParams& P) {
  return 0.5 * h1_quadratic_form(s, P) - coupling_K(s, P) / (2.0 * P.p + 2.0);
}

double nehari_residual(const FieldPair& s, const PhysParams& P) {
  const double A = h1_quadratic_form(s, P);
  if (A == 0.0) throw numerics_error("Nehari excludes (0,0)");
  return A - coupling_K(s, P);
}

double pohozaev_residual(const FieldPair& s, const PhysParams& P) {
  const double grad = gradient_norm_sq(s.phi) + gradient_norm_sq(s.psi);
  const double wmass = P.omega1 * mass(s.phi) + P.omega2 * mass(s.psi);
  const double K = coupling_K(s, P);
  return 0.5 * (P.n - 2.0) * grad + 0.5 * P.n * wmass - P.n / (2.0 * P.p + 2.0) * K;
}

double variance(const FieldPair& s, bool* boundary_warning) {
  s.check_consistent();
  if (boundary_warning) *boundary_warning = pair_boundary_warning(s);
  const Grid& g = s.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < s.phi.samples.size(); ++i)
    sum += radius_sq(g, i) * (std::norm(s.phi.samples[i]) + std::norm(s.psi.samples[i]));
  return sum * g.cell_volume();
}

double variance_rate(const FieldPair& s, bool* boundary_warning) {
  s.check_consistent();
  if (boundary_warning) *boundary_warning = pair_boundary_warning(s);
  const Grid& g = s.grid();
  const int N = g.points;

  double sum = 0.0;
  for (int axis = 0; axis < g.n; ++axis) {
    ComplexField dphi = gradient_component(s.phi, axis);
    ComplexField dpsi = gradient_component(s.psi, axis);
    std::size_t stride = 1;
    for (int d = g.n - 1; d > axis; --d) stride *= static_cast<std::size_t>(N);
    for (std::size_t i = 0; i < dphi.samples.size(); ++i) {
      const double x = g.coords[(i / stride) % static_cast<std::size_t>(N)];
      sum += x * (dphi.samples[i] * std::conj(s.phi.samples[i])).imag();
      sum += x * (dpsi.samples[i] * std::conj(s.psi.samples[i])).imag();
    }
  }
  return 4.0 * sum * g.cell_volume();
}

double variance_accel(const FieldPair& s, const PhysParams& P) {
  const double grad = gradient_norm_sq(s.phi) + gradient_norm_sq(s.psi);
  const double K = coupling_K(s, P);
  const double via_gradient = 8.0 * grad - 4.0 * P.n * P.p / (P.p + 1.0) * K;
  const double E = 0.5 * grad - K / (2.0 * P.p + 2.0);
  const double via_energy = 16.0 * E - 8.0 * (P.n * P.p - 2.0) / (2.0 * P.p + 2.0) * K;
  const double scale = std::max({std::abs(via_gradient), 8.0 * grad, 16.0 * std::abs(E)});
  if (std::abs(via_gradient - via_energy) > 1e-10 * std::max(scale, 1e-300))
    throw numerics_error("variance_accel: the two V'' formulas disagree");
  return via_gradient;
}

FieldPair scale_pair(const FieldPair& s, const ScalingParams& sc) {
  if (!(sc.mu > 0.0) || !(sc.lambda > 0.0))
    throw configuration_error("scaling parameters must be positive");
  s.check_consistent();
  FieldPair out{dilate(s.phi, sc.lambda), dilate(s.psi, sc.lambda)};
  for (cplx& v : out.phi.samples) v *= sc.mu;
  for (cplx& v : out.psi.samples) v *= sc.mu;
  for (const ComplexField* f : {&out.phi, &out.psi}) {
    if (mass(*f) == 0.0) continue;
    if (spectral_tail_fraction(*f) > kScalingTailMax)
      throw numerics_error("scaling under-resolved: spectral tail above 1e-6 after dilation");
  }
  return out;
}

DiagnosticsRecord diagnostics(const FieldPair& s, const PhysParams& P, double t) {
  DiagnosticsRecord r;
  r.t = t;
  r.mass_phi = mass(s.phi);
  r.mass_psi = mass(s.psi);
  r.grad_phi_sq = gradient_norm_sq(s.phi);
  r.grad_psi_sq = gradient_norm_sq(s.psi);
  r.coupling_K = coupling_K(s, P);
  r.energy = 0.5 * (r.grad_phi_sq + r.grad_psi_sq) - r.coupling_K / (2.0 * P.p + 2.0);
  r.variance = variance(s);
  r.variance_rate = variance_rate(s);
  r.variance_accel = variance_accel(s, P);
  const double total = r.mass_phi + r.mass_psi;
  if (total > 0.0) {
    const double tphi = r.mass_phi > 0.0 ? spectral_tail_fraction(s.phi) : 0.0;
    const double tpsi = r.mass_psi > 0.0 ? spectral_tail_fraction(s.psi) : 0.0;
    r.tail_fraction = (tphi * r.mass_phi + tpsi * r.mass_psi) / total;
  }
  return r;
}

}  // namespace cnls
