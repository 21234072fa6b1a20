#include "cnls/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "cnls/errors.hpp"

namespace cnls {

namespace {

constexpr double kPhaseBudget = 0.1;  // rad per step for the adaptive rule

// When the tail monitor trips, gradient growth at least this far above the
// initial level marks the event as physical focusing rather than aliasing.
constexpr double kGradConfirmFactor = 4.0;

double max_nonlinear_frequency(const FieldPair& s, const PhysParams& P) {
  const double p = P.p;
  double worst = 0.0;
  for (std::size_t i = 0; i < s.phi.samples.size(); ++i) {
    const double au = std::abs(s.phi.samples[i]);
    const double av = std::abs(s.psi.samples[i]);
    if (au > 0.0)
      worst = std::max(worst, std::pow(au, 2.0 * p) +
                                  P.beta * std::pow(av, p + 1.0) * std::pow(au, p - 1.0));
    if (av > 0.0)
      worst = std::max(worst, std::pow(av, 2.0 * p) +
                                  P.beta * std::pow(au, p + 1.0) * std::pow(av, p - 1.0));
  }
  return worst;
}

}  // namespace

void StepSchedule::validate() const {
  if (!(dt > 0.0)) throw configuration_error("schedule: dt must be positive");
  if (!(t_end > 0.0)) throw configuration_error("schedule: t_end must be positive");
  if (output_every < 1) throw configuration_error("schedule: output_every must be >= 1");
  if (!(dt_min <= dt)) throw configuration_error("schedule: dt_min must not exceed dt");
}

void BlowupPolicy::validate() const {
  if (!(grad_growth_factor > 1.0))
    throw configuration_error("policy: grad_growth_factor must exceed 1");
  if (!(tail_max > 0.0)) throw configuration_error("policy: tail_max must be positive");
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::completed:
      return "completed";
    case Verdict::blowup_detected:
      return "blowup_detected";
    default:
      return "resolution_lost";
  }
}

const char* to_string(CauchyClass c) {
  switch (c) {
    case CauchyClass::global_subcritical:
      return "global_subcritical";
    case CauchyClass::global_small_mass:
      return "global_small_mass";
    case CauchyClass::blowup_negative_energy:
      return "blowup_negative_energy";
    default:
      return "undetermined";
  }
}

FieldPair nonlinear_phase(const FieldPair& s, double dt, const PhysParams& P) {
  const double p = P.p;
  FieldPair out = s;
  for (std::size_t i = 0; i < s.phi.samples.size(); ++i) {
    const double au = std::abs(s.phi.samples[i]);
    const double av = std::abs(s.psi.samples[i]);
    if (au > 0.0) {
      const double freq =
          std::pow(au, 2.0 * p) + P.beta * std::pow(av, p + 1.0) * std::pow(au, p - 1.0);
      out.phi.samples[i] *= std::polar(1.0, dt * freq);
    }
    if (av > 0.0) {
      const double freq =
          std::pow(av, 2.0 * p) + P.beta * std::pow(au, p + 1.0) * std::pow(av, p - 1.0);
      out.psi.samples[i] *= std::polar(1.0, dt * freq);
    }
  }
  return out;
}

FieldPair linear_step(const FieldPair& s, double dt) {
  const Grid& g = s.grid();
  const int N = g.points;
  const auto& k = g.wavenumbers;
  // exp(-i dt k^2) per dimension; the tensor factorizes
  std::vector<cplx> phase(static_cast<std::size_t>(N));
  for (int m = 0; m < N; ++m) phase[m] = std::polar(1.0, -dt * k[m] * k[m]);

  FieldPair out;
  out.phi.grid = g;
  out.psi.grid = g;
  for (auto [in, res] : {std::pair{&s.phi, &out.phi}, std::pair{&s.psi, &out.psi}}) {
    std::vector<cplx> spec = fft_forward(g, in->samples);
    std::size_t idx = 0;
    if (g.n == 1) {
      for (int i = 0; i < N; ++i) spec[idx++] *= phase[i];
    } else if (g.n == 2) {
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) spec[idx++] *= phase[i] * phase[j];
    } else {
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
          const cplx pij = phase[i] * phase[j];
          for (int l = 0; l < N; ++l) spec[idx++] *= pij * phase[l];
        }
    }
    res->samples = fft_inverse(g, spec);
  }
  return out;
}

FieldPair step_strang(const FieldPair& s, double dt, const PhysParams& P) {
  FieldPair half = nonlinear_phase(s, 0.5 * dt, P);
  FieldPair drift = linear_step(half, dt);
  return nonlinear_phase(drift, 0.5 * dt, P);
}

double adaptive_dt(const FieldPair& s, const PhysParams& P, double dt_base, double dt_min) {
  const double freq = max_nonlinear_frequency(s, P);
  double dt = dt_base;
  if (freq > 0.0) dt = std::min(dt_base, kPhaseBudget / freq);
  return std::max(dt, dt_min);
}

Trajectory evolve(const FieldPair& s0, const PhysParams& P, const StepSchedule& sched,
                  const BlowupPolicy& pol) {
  P.validate();
  sched.validate();
  pol.validate();
  s0.check_consistent();
  if (!all_finite(s0.phi) || !all_finite(s0.psi))
    throw configuration_error("evolve: initial data not finite");

  Trajectory traj;
  DiagnosticsRecord r0 = diagnostics(s0, P, 0.0);
  if (r0.tail_fraction >= pol.tail_max)
    throw configuration_error("evolve: initial data under-resolved (spectral tail " +
                              std::to_string(r0.tail_fraction) + ")");
  traj.records.push_back(r0);
  const double grad0 = std::max(r0.grad_phi_sq + r0.grad_psi_sq, 1e-300);

  FieldPair state = s0;
  double t = 0.0;
  long step = 0;
  traj.verdict = Verdict::completed;
  traj.t_event = sched.t_end;

  while (t < sched.t_end - 1e-14 * sched.t_end) {
    double dt = sched.dt;
    if (sched.adapt) {
      const double freq = max_nonlinear_frequency(state, P);
      const double raw = freq > 0.0 ? std::min(sched.dt, kPhaseBudget / freq) : sched.dt;
      if (raw < sched.dt_min) {
        traj.verdict = Verdict::resolution_lost;
        traj.t_event = t;
        break;
      }
      dt = raw;
    }
    dt = std::min(dt, sched.t_end - t);

    state = step_strang(state, dt, P);
    t += dt;
    ++step;

    if (!all_finite(state.phi) || !all_finite(state.psi))
      throw numerics_error("evolve: non-finite state at step " + std::to_string(step));

    const bool last = t >= sched.t_end - 1e-14 * sched.t_end;
    if (step % sched.output_every == 0 || last) {
      DiagnosticsRecord r = diagnostics(state, P, t);
      traj.records.push_back(r);
      const double grad = r.grad_phi_sq + r.grad_psi_sq;
      const bool grad_trigger = grad >= pol.grad_growth_factor * grad0;
      const bool tail_trigger = r.tail_fraction > pol.tail_max;
      if (grad_trigger && !tail_trigger) {
        traj.verdict = Verdict::blowup_detected;
        traj.t_event = t;
        break;
      }
      if (tail_trigger) {
        traj.verdict = grad >= kGradConfirmFactor * grad0 ? Verdict::blowup_detected
                                                          : Verdict::resolution_lost;
        traj.t_event = t;
        break;
      }
    }
  }

  traj.final_state = std::move(state);
  return traj;
}

CauchyClass classify_cauchy_data(const FieldPair& s0, const PhysParams& P,
                                 std::optional<double> gn_constant) {
  P.validate();
  if (P.n >= 3 && P.p > P.supercritical_limit() + 1e-12)
    throw configuration_error("classify: p outside the local well-posedness range 2/(n-2)");

  if (P.is_subcritical()) return CauchyClass::global_subcritical;

  if (P.is_critical()) {
    if (!gn_constant)
      throw configuration_error("classify: critical case requires the sharp constant");
    const auto [mphi, mpsi] = mass_pair(s0);
    const double total = mphi + mpsi;
    if (std::pow(total, 2.0 / P.n) < (P.p + 1.0) / *gn_constant)
      return CauchyClass::global_small_mass;
    if (energy(s0, P) < 0.0) return CauchyClass::blowup_negative_energy;
  }
  return CauchyClass::undetermined;
}

}  // namespace cnls
