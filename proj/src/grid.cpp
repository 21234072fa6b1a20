#include "cnls/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "cnls/errors.hpp"

namespace cnls {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

// Plan cache. FFTW planning is not thread-safe; execution via
// fftw_execute_dft is. Plans are created with FFTW_UNALIGNED so they can be
// executed on any caller buffer.
class PlanCache {
 public:
  fftw_plan get(int rank, int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(rank, n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int d = 0; d < rank; ++d) total *= static_cast<std::size_t>(n);
    std::vector<cplx> a(total), b(total);
    std::vector<int> dims(static_cast<std::size_t>(rank), n);
    fftw_plan p = fftw_plan_dft(rank, dims.data(),
                                reinterpret_cast<fftw_complex*>(a.data()),
                                reinterpret_cast<fftw_complex*>(b.data()), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_[key] = p;
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void dft(const Grid& g, const std::vector<cplx>& in, std::vector<cplx>& out, int sign) {
  fftw_plan p = plan_cache().get(g.n, g.points, sign);
  out.resize(in.size());
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

// Calls fn(flat_index, |k|^2) over the full spectral tensor.
template <typename F>
void for_each_ksq(const Grid& g, F&& fn) {
  const int N = g.points;
  const auto& k = g.wavenumbers;
  std::size_t idx = 0;
  switch (g.n) {
    case 1:
      for (int i = 0; i < N; ++i) fn(idx++, k[i] * k[i]);
      break;
    case 2:
      for (int i = 0; i < N; ++i) {
        const double ki2 = k[i] * k[i];
        for (int j = 0; j < N; ++j) fn(idx++, ki2 + k[j] * k[j]);
      }
      break;
    default:
      for (int i = 0; i < N; ++i) {
        const double ki2 = k[i] * k[i];
        for (int j = 0; j < N; ++j) {
          const double kij2 = ki2 + k[j] * k[j];
          for (int l = 0; l < N; ++l) fn(idx++, kij2 + k[l] * k[l]);
        }
      }
  }
}

}  // namespace

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int d = 0; d < n; ++d) s *= static_cast<std::size_t>(points);
  return s;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int d = 0; d < n; ++d) v *= spacing();
  return v;
}

double Grid::nyquist() const { return kPi * points / box_length; }

Grid make_grid(int n, int points, double box_length) {
  if (n < 1 || n > 3)
    throw configuration_error("grid dimension must be 1, 2 or 3, got " + std::to_string(n));
  if (!is_power_of_two(points) || points < 8)
    throw configuration_error("grid points per dimension must be a power of two >= 8, got " +
                              std::to_string(points));
  if (!(box_length > 0.0)) throw configuration_error("grid box length must be positive");

  Grid g;
  g.n = n;
  g.points = points;
  g.box_length = box_length;
  g.wavenumbers.resize(points);
  g.coords.resize(points);
  const double dk = 2.0 * kPi / box_length;
  const double h = box_length / points;
  for (int m = 0; m < points; ++m) {
    const int signed_m = (m < points / 2) ? m : m - points;
    g.wavenumbers[m] = dk * signed_m;
    g.coords[m] = -0.5 * box_length + h * m;
  }
  return g;
}

ComplexField make_field(const Grid& g) {
  ComplexField f;
  f.grid = g;
  f.samples.assign(g.size(), cplx(0.0, 0.0));
  return f;
}

bool all_finite(const ComplexField& f) {
  for (const cplx& s : f.samples)
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) return false;
  return true;
}

std::vector<cplx> fft_forward(const Grid& g, const std::vector<cplx>& in) {
  std::vector<cplx> out;
  dft(g, in, out, FFTW_FORWARD);
  return out;
}

std::vector<cplx> fft_inverse(const Grid& g, const std::vector<cplx>& in) {
  std::vector<cplx> out;
  dft(g, in, out, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (cplx& v : out) v *= scale;
  return out;
}

ComplexField laplacian(const ComplexField& f) {
  std::vector<cplx> spec = fft_forward(f.grid, f.samples);
  for_each_ksq(f.grid, [&](std::size_t idx, double ksq) { spec[idx] *= -ksq; });
  ComplexField out;
  out.grid = f.grid;
  out.samples = fft_inverse(f.grid, spec);
  return out;
}

ComplexField gradient_component(const ComplexField& f, int axis) {
  if (axis < 0 || axis >= f.grid.n) throw configuration_error("gradient axis out of range");
  std::vector<cplx> spec = fft_forward(f.grid, f.samples);
  const int N = f.grid.points;
  const auto& k = f.grid.wavenumbers;
  // stride of `axis` in the row-major tensor
  std::size_t stride = 1;
  for (int d = f.grid.n - 1; d > axis; --d) stride *= static_cast<std::size_t>(N);
  const std::size_t total = f.grid.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    const int m = static_cast<int>((idx / stride) % static_cast<std::size_t>(N));
    spec[idx] *= cplx(0.0, k[m]);
  }
  ComplexField out;
  out.grid = f.grid;
  out.samples = fft_inverse(f.grid, spec);
  return out;
}

double integrate(const Grid& g, const std::vector<double>& values) {
  if (values.size() != g.size())
    throw configuration_error("integrate: sample count does not match grid");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * g.cell_volume();
}

double lp_power(const ComplexField& f, double q) {
  if (q < 1.0) throw configuration_error("lp_power requires exponent q >= 1");
  double sum = 0.0;
  if (q == 2.0) {
    for (const cplx& s : f.samples) sum += std::norm(s);
  } else {
    for (const cplx& s : f.samples) sum += std::pow(std::abs(s), q);
  }
  return sum * f.grid.cell_volume();
}

double mass(const ComplexField& f) { return lp_power(f, 2.0); }

double gradient_norm_sq(const ComplexField& f) {
  std::vector<cplx> spec = fft_forward(f.grid, f.samples);
  double sum = 0.0;
  for_each_ksq(f.grid, [&](std::size_t idx, double ksq) { sum += ksq * std::norm(spec[idx]); });
  // Parseval: integral |f|^2 = (h^n / N^n) sum |F|^2
  return sum * f.grid.cell_volume() / static_cast<double>(f.grid.size());
}

double spectral_tail_fraction(const ComplexField& f) {
  std::vector<cplx> spec = fft_forward(f.grid, f.samples);
  const double cut = (2.0 / 3.0) * f.grid.nyquist();
  const int N = f.grid.points;
  const auto& k = f.grid.wavenumbers;
  std::vector<bool> hi(static_cast<std::size_t>(N));
  for (int m = 0; m < N; ++m) hi[m] = std::abs(k[m]) >= cut;

  double total = 0.0, tail = 0.0;
  const std::size_t sz = f.grid.size();
  for (std::size_t idx = 0; idx < sz; ++idx) {
    const double e = std::norm(spec[idx]);
    total += e;
    // decompose idx into per-dimension indices
    std::size_t rem = idx;
    bool in_tail = false;
    for (int d = f.grid.n - 1; d >= 0; --d) {
      const int m = static_cast<int>(rem % static_cast<std::size_t>(N));
      rem /= static_cast<std::size_t>(N);
      if (hi[m]) {
        in_tail = true;
        break;
      }
    }
    if (in_tail) tail += e;
  }
  if (total == 0.0) throw numerics_error("undefined tail fraction: zero field");
  return tail / total;
}

double boundary_mass_fraction(const ComplexField& f) {
  const int N = f.grid.points;
  double total = 0.0, edge = 0.0;
  const std::size_t sz = f.grid.size();
  for (std::size_t idx = 0; idx < sz; ++idx) {
    const double e = std::norm(f.samples[idx]);
    total += e;
    std::size_t rem = idx;
    for (int d = f.grid.n - 1; d >= 0; --d) {
      const int i = static_cast<int>(rem % static_cast<std::size_t>(N));
      rem /= static_cast<std::size_t>(N);
      if (i == 0 || i == N - 1) {
        edge += e;
        break;
      }
    }
  }
  return total > 0.0 ? edge / total : 0.0;
}

ComplexField dilate(const ComplexField& f, double lambda) {
  if (!(lambda > 0.0)) throw configuration_error("dilation factor must be positive");
  const Grid& g = f.grid;
  const int N = g.points;
  std::vector<cplx> work = fft_forward(g, f.samples);

  // Per-axis evaluation matrix applied to the spectral tensor along each axis
  // in turn; the product over axes evaluates the trig interpolant at
  // lambda * x. The k_m * L/2 term compensates the offset between FFTW's
  // index-0 origin and the centered coordinate x_0 = -L/2.
  std::vector<cplx> eval(static_cast<std::size_t>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int m = 0; m < N; ++m)
      eval[static_cast<std::size_t>(i) * N + m] = std::polar(
          1.0 / N, g.wavenumbers[m] * (lambda * g.coords[i] + 0.5 * g.box_length));

  std::vector<cplx> next(work.size());
  std::vector<cplx> line_in(static_cast<std::size_t>(N)), line_out(static_cast<std::size_t>(N));
  for (int axis = 0; axis < g.n; ++axis) {
    std::size_t stride = 1;
    for (int d = g.n - 1; d > axis; --d) stride *= static_cast<std::size_t>(N);
    const std::size_t block = stride * static_cast<std::size_t>(N);
    const std::size_t nblocks = work.size() / block;
    for (std::size_t b = 0; b < nblocks; ++b) {
      for (std::size_t off = 0; off < stride; ++off) {
        const std::size_t base = b * block + off;
        for (int m = 0; m < N; ++m) line_in[m] = work[base + stride * m];
        for (int i = 0; i < N; ++i) {
          cplx acc(0.0, 0.0);
          const cplx* row = &eval[static_cast<std::size_t>(i) * N];
          for (int m = 0; m < N; ++m) acc += row[m] * line_in[m];
          line_out[i] = acc;
        }
        for (int i = 0; i < N; ++i) next[base + stride * i] = line_out[i];
      }
    }
    work.swap(next);
  }

  ComplexField out;
  out.grid = g;
  out.samples = std::move(work);

  // The trig interpolant is L-periodic: for lambda > 1 evaluation points
  // beyond the box would fold back into the bulk. The dilated field of a
  // decaying profile is zero there instead.
  if (lambda > 1.0) {
    const double half = 0.5 * g.box_length;
    std::vector<bool> outside(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
      const double y = lambda * g.coords[i];
      outside[i] = y < -half || y >= half;
    }
    const std::size_t sz = out.samples.size();
    for (std::size_t idx = 0; idx < sz; ++idx) {
      std::size_t rem = idx;
      for (int d = g.n - 1; d >= 0; --d) {
        const int i = static_cast<int>(rem % static_cast<std::size_t>(N));
        rem /= static_cast<std::size_t>(N);
        if (outside[i]) {
          out.samples[idx] = cplx(0.0, 0.0);
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace cnls
