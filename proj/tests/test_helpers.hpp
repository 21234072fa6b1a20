#pragma once

#include <cmath>
#include <random>
#include <type_traits>

#include "cnls/grid.hpp"

namespace cnls::testing {

// Evaluates fn(x) (n=1), fn(x,y) (n=2) or fn(x,y,z) (n=3) on every grid point.
template <typename Fn>
ComplexField sample_field(const Grid& g, Fn&& fn) {
  ComplexField f = make_field(g);
  const int N = g.points;
  const auto& x = g.coords;
  std::size_t idx = 0;
  if constexpr (std::is_invocable_v<Fn, double>) {
    for (int i = 0; i < N; ++i) f.samples[idx++] = fn(x[i]);
  } else if constexpr (std::is_invocable_v<Fn, double, double>) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) f.samples[idx++] = fn(x[i], x[j]);
  } else {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l) f.samples[idx++] = fn(x[i], x[j], x[l]);
  }
  return f;
}

// Smooth localized random field: a few Gaussian bumps with seeded centers,
// widths and complex amplitudes, kept away from the box boundary.
inline ComplexField random_localized_field(const Grid& g, std::uint64_t seed, int bumps = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> center(-g.box_length / 8.0, g.box_length / 8.0);
  std::uniform_real_distribution<double> width(0.6, 1.6);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);

  ComplexField f = make_field(g);
  for (int b = 0; b < bumps; ++b) {
    double c[3] = {0, 0, 0};
    for (int d = 0; d < g.n; ++d) c[d] = center(rng);
    const double w = width(rng);
    const cplx a(amp(rng), amp(rng));
    const int N = g.points;
    const auto& x = g.coords;
    std::size_t idx = 0;
    if (g.n == 1) {
      for (int i = 0; i < N; ++i) {
        const double r2 = (x[i] - c[0]) * (x[i] - c[0]);
        f.samples[idx++] += a * std::exp(-r2 / (2 * w * w));
      }
    } else if (g.n == 2) {
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
          const double r2 =
              (x[i] - c[0]) * (x[i] - c[0]) + (x[j] - c[1]) * (x[j] - c[1]);
          f.samples[idx++] += a * std::exp(-r2 / (2 * w * w));
        }
    } else {
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
          for (int l = 0; l < N; ++l) {
            const double r2 = (x[i] - c[0]) * (x[i] - c[0]) +
                              (x[j] - c[1]) * (x[j] - c[1]) +
                              (x[l] - c[2]) * (x[l] - c[2]);
            f.samples[idx++] += a * std::exp(-r2 / (2 * w * w));
          }
    }
  }
  return f;
}

}  // namespace cnls::testing
