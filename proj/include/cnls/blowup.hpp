#pragma once

#include <string>
#include <utility>

#include "cnls/groundstate.hpp"

namespace cnls {

/// Virial blow-up certificate for critical-case data. When p = 2/n the
/// variance obeys V'' = 16E exactly, so V(t) = V(0) + V'(0) t + 8E t^2; for
/// E < 0 the least positive root bounds the existence time from above.
struct BlowupCertificate {
  bool applicable = false;  // p = 2/n and E < 0
  double energy = 0.0;
  double v0 = 0.0;
  double v1 = 0.0;
  double t_upper = 0.0;
  std::string note;
};

/// The pseudo-conformal pair
///   (1-t)^{-n/2} exp(-i(|x|^2 - 4 omega_j)/(4(1-t))) (U, V)(x/(1-t))
/// sampled on the grid of g; omega_j defaults to the frequencies g solves.
/// Requires 0 <= t < 1 and the dilated profile to stay resolved.
FieldPair explicit_blowup_pair(double t, const GroundState& g, double omega1, double omega2);
FieldPair explicit_blowup_pair(double t, const GroundState& g);

/// Max-norm residual of the time-dependent system on the family member at
/// time t: the time derivative is taken analytically, the Laplacian
/// spectrally. Near zero only when g solves the elliptic system at p = 2/n
/// and the phase frequencies match.
double explicit_blowup_residual_max(double t, const GroundState& g, double omega1,
                                    double omega2);
double explicit_blowup_residual_max(double t, const GroundState& g);

BlowupCertificate virial_certificate(const FieldPair& s0, const PhysParams& P);

/// Uncertainty-principle mass trap in the dimension-correct sharp form
///   ||h||_2^2 <= (2/n) |||x| h||_2 ||grad h||_2,
/// returned as (lhs, rhs); lhs <= rhs for every localized field.
std::pair<double, double> mass_trap_check(const ComplexField& f);

}  // namespace cnls
