#pragma once

#include <string>
#include <utility>

#include "cnls/grid.hpp"

namespace cnls {

/// Parameter set of the coupled system: dimension n, nonlinearity power p,
/// coupling beta, and the stationary frequencies omega1/omega2 (1 by default,
/// which recovers the un-weighted functionals).
struct PhysParams {
  int n = 1;
  double p = 1.0;
  double beta = 1.0;
  double omega1 = 1.0;
  double omega2 = 1.0;

  void validate() const;
  double critical_p() const { return 2.0 / n; }
  /// H^1 local well-posedness limit 2/(n-2), +infinity for n <= 2.
  double supercritical_limit() const;
  bool is_subcritical() const { return p < critical_p() && !is_critical(); }
  bool is_critical() const;
  bool is_supercritical() const;
};

/// The state (phi, psi) of the system at one time; both components share a grid.
struct FieldPair {
  ComplexField phi;
  ComplexField psi;

  const Grid& grid() const { return phi.grid; }
  void check_consistent() const;
};

FieldPair make_pair(const Grid& g);

/// Amplitude/dilation parameters of the scaling u_{mu,lambda}(x) = mu u(lambda x).
struct ScalingParams {
  double mu = 1.0;
  double lambda = 1.0;
};

/// One diagnostics row along a trajectory.
struct DiagnosticsRecord {
  double t = 0.0;
  double mass_phi = 0.0;
  double mass_psi = 0.0;
  double grad_phi_sq = 0.0;
  double grad_psi_sq = 0.0;
  double energy = 0.0;
  double coupling_K = 0.0;
  double variance = 0.0;
  double variance_rate = 0.0;
  double variance_accel = 0.0;
  double tail_fraction = 0.0;

  bool finite() const;
};

/// Fixed CSV column contract for diagnostics streams.
std::string diagnostics_csv_header();
std::string diagnostics_csv_row(const DiagnosticsRecord& r);

// --- scalar functionals -----------------------------------------------------

/// (||phi||_2^2, ||psi||_2^2)
std::pair<double, double> mass_pair(const FieldPair& s);

/// K = ||u||_{2p+2}^{2p+2} + 2 beta ||u v||_{p+1}^{p+1} + ||v||_{2p+2}^{2p+2}
double coupling_K(const FieldPair& s, const PhysParams& P);

/// E = (||grad phi||^2 + ||grad psi||^2)/2 - K/(2p+2)
double energy(const FieldPair& s, const PhysParams& P);

/// omega-weighted quadratic form  ||grad u||^2 + ||grad v||^2 + w1||u||^2 + w2||v||^2
double h1_quadratic_form(const FieldPair& s, const PhysParams& P);

/// Quotient whose infimum is the reciprocal of the sharp constant:
/// J = (grad terms)^{pn/2} (w1||u||^2 + w2||v||^2)^{p+1-pn/2} / K.
/// Errors when K = 0.
double gn_quotient_J(const FieldPair& s, const PhysParams& P);

/// I = h1_quadratic_form/2 - K/(2p+2); its critical points solve the
/// stationary elliptic system.
double action_I(const FieldPair& s, const PhysParams& P);

/// h1_quadratic_form - K; zero exactly on the Nehari manifold.
/// Errors on the zero pair.
double nehari_residual(const FieldPair& s, const PhysParams& P);

/// (n-2)/2 grad + n/2 (w1||u||^2 + w2||v||^2) - n/(2p+2) K; vanishes on
/// localized solutions of the elliptic system.
double pohozaev_residual(const FieldPair& s, const PhysParams& P);

/// V = integral |x|^2 (|phi|^2 + |psi|^2), x measured from the box center.
/// `boundary_warning`, when given, is set if the boundary-layer mass fraction
/// exceeds 1e-6 (variance untrusted near the boundary).
double variance(const FieldPair& s, bool* boundary_warning = nullptr);

/// V' = 4 Im integral [(x.grad phi) conj(phi) + (x.grad psi) conj(psi)]
double variance_rate(const FieldPair& s, bool* boundary_warning = nullptr);

/// V'' evaluated through both equivalent formulas
///   8 (grad terms) - 4np/(p+1) K   and   16 E - 8 (np-2)/(2p+2) K,
/// asserting their agreement to 1e-10 relative.
double variance_accel(const FieldPair& s, const PhysParams& P);

/// (mu u(lambda x), mu v(lambda x)) by spectral resampling. Errors when the
/// dilated pair is no longer resolved (spectral tail fraction > 1e-6).
FieldPair scale_pair(const FieldPair& s, const ScalingParams& sc);

DiagnosticsRecord diagnostics(const FieldPair& s, const PhysParams& P, double t);

}  // namespace cnls
