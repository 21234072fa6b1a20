#pragma once

#include <vector>

#include "cnls/grid.hpp"

namespace cnls {

/// Radial profile z(r) of a positive decaying solution of
///   z'' + (n-1)/r z' - z + a z^{2p+1} = 0,  z'(0) = 0,
/// sampled on r_i = i*dr up to r_max. Tail beyond machine-precision shooting
/// accuracy is replaced by the asymptotic decay  z ~ C r^{-(n-1)/2} e^{-r}.
struct RadialProfile {
  int n = 1;
  double p = 1.0;
  double a = 1.0;  // nonlinearity coefficient (1+beta for the diagonal ansatz)
  double r_max = 20.0;
  double dr = 1e-3;
  std::vector<double> values;       // z(i*dr)
  std::vector<double> derivatives;  // z'(i*dr), z'(0)=0 enforced

  double center_value() const { return values.front(); }
  /// 4-point Lagrange interpolation; exponential continuation beyond r_max.
  double value_at(double r) const;
};

/// Bisection on z(0) towards the separatrix between profiles that cross zero
/// and profiles that turn back upward. Errors when no bracket exists.
/// r_max = 25 keeps the grafted tail below 1e-10 of the center value.
RadialProfile shoot_scalar_radial(int n, double p, double a, double r_max = 25.0,
                                  double dr = 1e-3);

/// integral z^2 dx over R^n (Simpson in r with the sphere measure).
double radial_mass(const RadialProfile& z);
/// integral |z'|^2 dx
double radial_gradient_sq(const RadialProfile& z);
/// integral z^q dx
double radial_lp_power(const RadialProfile& z, double q);
/// integral |x|^2 z^2 dx
double radial_variance(const RadialProfile& z);

/// Max-norm ODE residual via centered finite differences, on [2dr, 0.9 r_max].
double radial_ode_residual_max(const RadialProfile& z);

/// Samples w(x) = amplitude * z(stretch * |x|) on the grid (real field).
ComplexField sample_radial(const RadialProfile& z, const Grid& g, double amplitude = 1.0,
                           double stretch = 1.0);

}  // namespace cnls
