#include "cnls/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cnls/errors.hpp"

namespace cnls {

namespace {

enum class ShotOutcome { overshoot, undershoot, reached_end };

struct State {
  double z;
  double w;  // z'
};

// Single RK4 integration from the origin series expansion. Events: crossing
// zero (overshoot) or turning back upward below the start value (undershoot).
ShotOutcome integrate(int n, double p, double a, double z0, double r_max, double dr,
                      std::vector<double>* zs, std::vector<double>* ws) {
  const auto rhs = [&](double r, State s) -> State {
    const double nl = a * std::pow(std::abs(s.z), 2.0 * p) * s.z;
    return {s.w, s.z - nl - (n - 1) / r * s.w};
  };

  // Even series about the removable singularity, z = z0 + c2 r^2 + c4 r^4 +
  // c6 r^6 with g(z) = z - a z^{2p+1}:
  //   2n c2 = g(z0),  (4n+8) c4 = g'(z0) c2,  6(n+4) c6 = g'(z0) c4 + g''(z0) c2^2/2.
  // RK4 takes over at r0 = 10 dr, clear of the 1/r coordinate singularity.
  const double gp = 1.0 - a * (2.0 * p + 1.0) * std::pow(z0, 2.0 * p);
  const double gpp = -a * (2.0 * p + 1.0) * 2.0 * p * std::pow(z0, 2.0 * p - 1.0);
  const double c2 = (z0 - a * std::pow(z0, 2.0 * p + 1.0)) / (2.0 * n);
  const double c4 = gp * c2 / (4.0 * n + 8.0);
  const double c6 = (gp * c4 + 0.5 * gpp * c2 * c2) / (6.0 * (n + 4.0));
  const auto series_z = [&](double r) {
    const double r2 = r * r;
    return z0 + r2 * (c2 + r2 * (c4 + r2 * c6));
  };
  const auto series_w = [&](double r) {
    const double r2 = r * r;
    return r * (2.0 * c2 + r2 * (4.0 * c4 + r2 * 6.0 * c6));
  };

  const long start = 10;
  State s{series_z(start * dr), series_w(start * dr)};
  if (zs) {
    zs->clear();
    ws->clear();
    for (long i = 0; i <= start; ++i) {
      zs->push_back(series_z(i * dr));
      ws->push_back(series_w(i * dr));
    }
  }

  const long steps = std::lround(r_max / dr);
  double r = start * dr;
  for (long i = start; i < steps; ++i) {
    const State k1 = rhs(r, s);
    const State k2 = rhs(r + dr / 2, {s.z + dr / 2 * k1.z, s.w + dr / 2 * k1.w});
    const State k3 = rhs(r + dr / 2, {s.z + dr / 2 * k2.z, s.w + dr / 2 * k2.w});
    const State k4 = rhs(r + dr, {s.z + dr * k3.z, s.w + dr * k3.w});
    s.z += dr / 6 * (k1.z + 2 * k2.z + 2 * k3.z + k4.z);
    s.w += dr / 6 * (k1.w + 2 * k2.w + 2 * k3.w + k4.w);
    r += dr;
    if (zs) {
      zs->push_back(s.z);
      ws->push_back(s.w);
    }
    if (s.z <= 0.0) return ShotOutcome::overshoot;
    if (s.w > 0.0 && s.z < 0.9 * z0) return ShotOutcome::undershoot;
    if (s.z > 1.5 * z0) return ShotOutcome::undershoot;
  }
  return ShotOutcome::reached_end;
}

}  // namespace

RadialProfile shoot_scalar_radial(int n, double p, double a, double r_max, double dr) {
  if (n < 1 || n > 3) throw configuration_error("radial shooting: n must be 1, 2 or 3");
  if (!(p > 0.0)) throw configuration_error("radial shooting: p must be positive");
  if (n >= 3 && p > 2.0 / (n - 2) + 1e-12)
    throw configuration_error("radial shooting: p beyond the H^1 range 2/(n-2)");
  if (!(a > 0.0)) throw configuration_error("radial shooting: coefficient a must be positive");

  const auto classify = [&](double z0) {
    return integrate(n, p, a, z0, r_max, dr, nullptr, nullptr);
  };

  // Bracket the separatrix: lo undershoots, hi overshoots.
  double lo = 1.0, hi = 1.0;
  {
    int guard = 0;
    while (classify(lo) == ShotOutcome::overshoot && guard++ < 60) lo *= 0.5;
    if (guard >= 60) throw numerics_error("no ground state bracket found (lower)");
    guard = 0;
    while (classify(hi) != ShotOutcome::overshoot && guard++ < 60) hi *= 1.5;
    if (guard >= 60) throw numerics_error("no ground state bracket found (upper)");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (classify(mid) == ShotOutcome::overshoot)
      hi = mid;
    else
      lo = mid;
  }
  const double z0 = 0.5 * (lo + hi);

  RadialProfile prof;
  prof.n = n;
  prof.p = p;
  prof.a = a;
  prof.r_max = r_max;
  prof.dr = dr;
  integrate(n, p, a, z0, r_max, dr, &prof.values, &prof.derivatives);
  const std::size_t total = static_cast<std::size_t>(std::lround(r_max / dr)) + 1;
  prof.values.resize(total, 0.0);
  prof.derivatives.resize(total, 0.0);

  // Graft the asymptotic tail before bisection noise takes over (the error
  // grows like e^{+r}, contaminating the shot around z ~ 1e-8 z0). The graft
  // z = z_c (r_c/r)^nu exp(-kappa (r - r_c)) matches z and z' at the cut, so
  // the profile stays C^1 and the ODE residual of the model tail is O(z/r^2).
  std::size_t cut = total;
  for (std::size_t i = 1; i < total; ++i) {
    if (prof.values[i] <= 0.0 || prof.values[i] >= prof.values[i - 1] ||
        prof.values[i] < 1e-7 * z0) {
      cut = i;
      break;
    }
  }
  if (cut < total) {
    const double rc = (cut - 1) * dr;
    const double zc = prof.values[cut - 1];
    const double wc = prof.derivatives[cut - 1];
    const double nu = 0.5 * (n - 1);
    double kappa = -wc / zc - nu / rc;
    if (!(kappa > 0.5 && kappa < 1.5)) kappa = 1.0;
    for (std::size_t i = cut; i < total; ++i) {
      const double r = i * dr;
      prof.values[i] = zc * std::pow(rc / r, nu) * std::exp(-kappa * (r - rc));
      prof.derivatives[i] = prof.values[i] * (-nu / r - kappa);
    }
  }
  return prof;
}

double RadialProfile::value_at(double r) const {
  r = std::abs(r);
  if (r >= r_max) {
    const double zt = values.back();
    return zt * std::pow(r_max / r, 0.5 * (n - 1)) * std::exp(-(r - r_max));
  }
  const long i = std::lround(std::floor(r / dr));
  const long last = static_cast<long>(values.size()) - 1;
  const long i0 = std::clamp(i - 1, 0L, last - 3);
  const double t = (r - i0 * dr) / dr;  // in [0,3] over the 4-point stencil
  const double* v = &values[static_cast<std::size_t>(i0)];
  // Lagrange basis on nodes {0,1,2,3}
  const double l0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
  const double l1 = t * (t - 2) * (t - 3) / 2.0;
  const double l2 = -t * (t - 1) * (t - 3) / 2.0;
  const double l3 = t * (t - 1) * (t - 2) / 6.0;
  return v[0] * l0 + v[1] * l1 + v[2] * l2 + v[3] * l3;
}

namespace {

double sphere_area(int n) {
  switch (n) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * std::numbers::pi;
    default:
      return 4.0 * std::numbers::pi;
  }
}

// Simpson over the stored radial samples of fn(i) * r^{n-1}.
template <typename F>
double radial_integral(const RadialProfile& z, F&& fn) {
  const std::size_t m = z.values.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = i * z.dr;
    const double w = (i == 0 || i + 1 == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += w * fn(i) * std::pow(r, z.n - 1);
  }
  return sphere_area(z.n) * sum * z.dr / 3.0;
}

}  // namespace

double radial_mass(const RadialProfile& z) {
  return radial_integral(z, [&](std::size_t i) { return z.values[i] * z.values[i]; });
}

double radial_gradient_sq(const RadialProfile& z) {
  return radial_integral(z, [&](std::size_t i) { return z.derivatives[i] * z.derivatives[i]; });
}

double radial_lp_power(const RadialProfile& z, double q) {
  return radial_integral(z, [&](std::size_t i) { return std::pow(std::abs(z.values[i]), q); });
}

double radial_variance(const RadialProfile& z) {
  return radial_integral(z, [&](std::size_t i) {
    const double r = i * z.dr;
    return r * r * z.values[i] * z.values[i];
  });
}

double radial_ode_residual_max(const RadialProfile& z) {
  const std::size_t m = z.values.size();
  const std::size_t hi = static_cast<std::size_t>(0.9 * (m - 1));
  double worst = 0.0;
  // 4th-order five-point stencil keeps the differencing error well below the
  // RK4 solution error being certified.
  for (std::size_t i = 2; i <= hi; ++i) {
    const double r = i * z.dr;
    const double zpp = (-z.values[i - 2] + 16.0 * z.values[i - 1] - 30.0 * z.values[i] +
                        16.0 * z.values[i + 1] - z.values[i + 2]) /
                       (12.0 * z.dr * z.dr);
    const double res = zpp + (z.n - 1) / r * z.derivatives[i] - z.values[i] +
                       z.a * std::pow(std::abs(z.values[i]), 2.0 * z.p) * z.values[i];
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

ComplexField sample_radial(const RadialProfile& z, const Grid& g, double amplitude,
                           double stretch) {
  if (g.n != z.n) throw configuration_error("radial profile dimension does not match grid");
  ComplexField f = make_field(g);
  const int N = g.points;
  const auto& x = g.coords;
  std::size_t idx = 0;
  if (g.n == 1) {
    for (int i = 0; i < N; ++i)
      f.samples[idx++] = amplitude * z.value_at(stretch * std::abs(x[i]));
  } else if (g.n == 2) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        f.samples[idx++] = amplitude * z.value_at(stretch * std::hypot(x[i], x[j]));
  } else {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l)
          f.samples[idx++] = amplitude * z.value_at(stretch * std::hypot(x[i], x[j], x[l]));
  }
  return f;
}

}  // namespace cnls
