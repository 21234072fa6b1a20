#pragma once

#include <cstdint>
#include <utility>

#include "cnls/functionals.hpp"
#include "cnls/grid.hpp"
#include "cnls/radial.hpp"

namespace cnls {

enum class GroundStateKind { scalar_first, scalar_second, vector };

const char* to_string(GroundStateKind k);

/// A computed least-action solution of the stationary elliptic system with
/// its certificates. Residuals are stored relative to the coupling integral K.
struct GroundState {
  FieldPair pair;
  double action_m = 0.0;
  std::pair<double, double> masses{0.0, 0.0};
  double gn_constant = 0.0;
  double nehari_res = 0.0;
  double pohozaev_res = 0.0;
  GroundStateKind kind = GroundStateKind::vector;
  PhysParams params;

  double total_mass() const { return masses.first + masses.second; }
};

/// Closed-form radial projection onto the Nehari manifold: scales the pair by
/// s = (A/K)^{1/(2p)}. Errors when K = 0.
FieldPair nehari_project(const FieldPair& s, const PhysParams& P);

struct MinimizeOptions {
  int randomized_starts = 3;
  std::uint64_t seed = 0;
  int max_iterations = 8000;
  /// Convergence: L2 norm of the preconditioned action gradient relative to
  /// the L2 norm of the pair.
  double gradient_tolerance = 1e-12;
  /// Run the multi-start candidates concurrently.
  bool parallel = true;
};

/// Minimizes the action I over the Nehari manifold by preconditioned gradient
/// flow with reprojection after every accepted step, multi-started from
/// (z,0), (0,z), (zhat,zhat) and seeded perturbations; returns the lowest
/// converged candidate (tie-break: lowest start index).
GroundState minimize_action(const PhysParams& P, const Grid& g, const MinimizeOptions& opts = {});

/// Sharp constant from the action level via the constant-action relation; in
/// the critical case both available routes are evaluated and must agree to
/// 1e-6 relative. For omega != 1 the quotient route J(pair) is used directly.
double gn_constant_from_ground_state(const GroundState& g);

/// The diagonal test pair (zhat, zhat), zhat = (1+beta)^{-1/(2p)} z, which
/// solves the coupled elliptic system for every beta.
FieldPair build_test_pair_zhat(const PhysParams& P, const Grid& g);

/// Per-component weak-form identity residuals (relative):
///   ||grad u||^2 + w1 ||u||^2  vs  ||u||_{2p+2}^{2p+2} + beta ||uv||_{p+1}^{p+1}
/// and symmetrically for v.
std::pair<double, double> weak_form_certificate(const GroundState& g);

/// Max-norm residual of the stationary system on the grid (spectral Laplacian).
double elliptic_residual_max(const FieldPair& s, const PhysParams& P);

/// Packages a radially sampled solution as a certified GroundState (used for
/// oracle-backed states on large boxes, bypassing the grid flow).
GroundState ground_state_from_profile(const RadialProfile& z, const Grid& g, const PhysParams& P,
                                      GroundStateKind kind);

}  // namespace cnls
