#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace cnls {

using cplx = std::complex<double>;

/// Periodic uniform box discretizing R^n (n = 1, 2 or 3), same resolution per
/// dimension. Coordinates are centered: x_i = -L/2 + i*h with h = L/N, so the
/// box center is the origin of |x|^2-weighted quantities. Wavenumbers follow
/// FFT ordering k_m = 2*pi*m/L, m in {0,...,N/2-1, -N/2,...,-1}.
struct Grid {
  int n = 1;                        // spatial dimension
  int points = 0;                   // samples per dimension, power of two
  double box_length = 0.0;          // physical side length L
  std::vector<double> wavenumbers;  // per-dimension k table (size points)
  std::vector<double> coords;       // per-dimension x table (size points)

  double spacing() const { return box_length / points; }
  std::size_t size() const;            // points^n
  double cell_volume() const;          // h^n
  double nyquist() const;              // k_max = pi*N/L
  bool operator==(const Grid& o) const {
    return n == o.n && points == o.points && box_length == o.box_length;
  }
};

Grid make_grid(int n, int points, double box_length);

/// Complex double-precision samples over a Grid, row-major.
struct ComplexField {
  Grid grid;
  std::vector<cplx> samples;
};

ComplexField make_field(const Grid& g);
bool all_finite(const ComplexField& f);

/// Unnormalized forward DFT of the samples (FFTW sign convention,
/// F(k) = sum_x f(x) exp(-i k.x)). Thread-safe.
std::vector<cplx> fft_forward(const Grid& g, const std::vector<cplx>& in);
/// Inverse DFT including the 1/N^n normalization.
std::vector<cplx> fft_inverse(const Grid& g, const std::vector<cplx>& in);

/// Spectral Laplacian: exact for band-limited fields.
ComplexField laplacian(const ComplexField& f);

/// Spectral partial derivative along one axis (0-based).
ComplexField gradient_component(const ComplexField& f, int axis);

/// h^n * sum(values): periodic rectangle rule, spectrally accurate for
/// smooth decaying fields. Fixed summation order (bit-reproducible).
double integrate(const Grid& g, const std::vector<double>& values);

/// integral of |f|^q. Requires q >= 1.
double lp_power(const ComplexField& f, double q);

/// integral of |f|^2 (mass of one component).
double mass(const ComplexField& f);

/// integral of |grad f|^2 via Parseval.
double gradient_norm_sq(const ComplexField& f);

/// Fraction of spectral energy sum|F(k)|^2 in modes with any |k_d| >= (2/3) k_max.
/// Errors on the zero field.
double spectral_tail_fraction(const ComplexField& f);

/// Fraction of integral |f|^2 carried by the outermost cell layer (any
/// dimension at index 0 or N-1). Localization monitor for |x|^2 quantities.
double boundary_mass_fraction(const ComplexField& f);

/// Samples of the dilated trig interpolant f(lambda * x) on the same grid
/// (spectral resampling, exact for the interpolant).
ComplexField dilate(const ComplexField& f, double lambda);

}  // namespace cnls
