#pragma once

#include <string>
#include <vector>

#include "cnls/groundstate.hpp"

namespace cnls {

enum class Regime { scalar, vector, boundary };
const char* to_string(Regime r);

/// The critical-case (p = 2/n) threshold data at one coupling value. Two
/// numbers the paper writes with one symbol are kept apart: the sharp GN
/// constant (grows with beta) and the critical mass of the global-existence
/// statement (shrinks with beta); they are linked by
///   (n/(n+2)) critical_mass^{2/n} gn_constant = 1.
struct ThresholdReport {
  PhysParams params;  // p = 2/n
  double gn_constant = 0.0;
  double critical_mass = 0.0;
  double beta_star = 0.0;
  Regime regime = Regime::scalar;
  /// Active branch of the coupling bound: lhs is the computed constant, rhs
  /// the scalar baseline (beta <= beta*) or baseline*(1+beta)/2^{2/n}.
  double bound_lhs = 0.0;
  double bound_rhs = 0.0;
  double certificate_max_residual = 0.0;
  GroundState state;
};

/// beta* = 2^{2/n} - 1, where ground states switch from scalar to vector.
double regime_boundary(int n);

/// Critical mass from the sharp constant: ((p+1)/C)^{n/2} at p = 2/n.
double mass_threshold_from_gn(double gn_constant, int n);

/// Scalar single-equation baseline constant C_n on this grid (beta-free
/// problem), cached per (n, points, box_length).
double scalar_baseline_constant(int n, const Grid& g, const MinimizeOptions& opts = {});

ThresholdReport compute_threshold(int n, double beta, const Grid& g,
                                  const MinimizeOptions& opts = {});

struct CciCheck {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // (lhs - rhs)/rhs
};

/// Checks the active branch of the coupling bound with a 1e-3 relative margin:
/// equality below beta*, one-sided bound at and above it.
CciCheck verify_cci_bounds(const ThresholdReport& rep, double scalar_baseline);
CciCheck verify_cci_bounds(const ThresholdReport& rep);

struct SweepRow {
  double beta = 0.0;
  bool failed = false;
  std::string error;
  Regime regime = Regime::scalar;
  double action_m = 0.0;
  double critical_mass = 0.0;
  double gn_constant = 0.0;
  double bound_lhs = 0.0;
  double bound_rhs = 0.0;
  double certificate_max_residual = 0.0;
  bool holds = false;
};

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

/// One row per beta; failures are recorded in the row and do not abort the
/// sweep. Rows are computed in parallel across at most `workers` threads; the
/// scalar baseline is computed once up front and shared read-only.
std::vector<SweepRow> threshold_sweep(int n, const std::vector<double>& betas, const Grid& g,
                                      int workers = 1, const MinimizeOptions& opts = {});

}  // namespace cnls
