#pragma once

#include <optional>
#include <vector>

#include "cnls/functionals.hpp"

namespace cnls {

struct StepSchedule {
  double dt = 1e-3;
  double t_end = 1.0;
  int output_every = 10;  // diagnostic cadence in steps
  bool adapt = false;
  double dt_min = 1e-9;

  void validate() const;
};

/// Numerical proxy for finite-time blow-up: gradient growth beyond a factor
/// of its initial value, cross-checked against the spectral tail monitor to
/// separate genuine focusing from lost resolution.
struct BlowupPolicy {
  double grad_growth_factor = 1e6;
  double tail_max = 1e-2;

  void validate() const;
};

enum class Verdict { completed, blowup_detected, resolution_lost };
const char* to_string(Verdict v);

struct Trajectory {
  std::vector<DiagnosticsRecord> records;
  FieldPair final_state;
  Verdict verdict = Verdict::completed;
  /// Event time: t* for blowup_detected / resolution_lost, t_end otherwise.
  double t_event = 0.0;
};

/// Half of the coupled nonlinearity applied as an exact phase rotation: the
/// moduli |phi|, |psi| are pointwise invariant along the nonlinear subflow, so
/// phi <- phi exp(i dt (|phi|^{2p} + beta |psi|^{p+1} |phi|^{p-1})) is exact
/// (and symmetrically for psi).
FieldPair nonlinear_phase(const FieldPair& s, double dt, const PhysParams& P);

/// Free propagator exp(i dt Laplacian) applied in Fourier space (unitary).
FieldPair linear_step(const FieldPair& s, double dt);

/// Strang composition: nonlinear half step, linear full step, nonlinear half.
FieldPair step_strang(const FieldPair& s, double dt, const PhysParams& P);

/// min(dt_base, 0.1 rad / max pointwise nonlinear frequency), floored at dt_min.
double adaptive_dt(const FieldPair& s, const PhysParams& P, double dt_base, double dt_min = 0.0);

Trajectory evolve(const FieldPair& s0, const PhysParams& P, const StepSchedule& sched,
                  const BlowupPolicy& pol);

enum class CauchyClass {
  global_subcritical,
  global_small_mass,
  blowup_negative_energy,
  undetermined
};
const char* to_string(CauchyClass c);

/// A priori classification of initial data. `gn_constant` must carry the
/// critical sharp constant C_{n,2/n,beta} when p = 2/n.
CauchyClass classify_cauchy_data(const FieldPair& s0, const PhysParams& P,
                                 std::optional<double> gn_constant = std::nullopt);

}  // namespace cnls
