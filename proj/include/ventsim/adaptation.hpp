#pragma once

/**
 * @file adaptation.hpp
 * @brief Breath-by-breath set-point adaptation and its convergence checks.
 *
 * The tidal volume of breath k is modelled as V(k) = f(phi_tgt(k)) with f
 * bounded and strictly increasing. The set-point integrates the volume error,
 *
 *     phi_tgt(k+1) = phi_tgt(k) + g (V_ref - V(k)),
 *
 * and with g = 1/dV, dV the largest slope of f over all patients and
 * positions, the sequence approaches phi_ref monotonically without crossing
 * it and converges to it.
 */

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace ventsim {

struct AdaptationState {
  double phi_tgt = 0.25;  // rad
  double gain = 5.0e-4;   // rad/mL
  long k = 0;
  bool enabled = true;
};

struct SetpointLimits {
  double phi_min = 0.0;
  double phi_max = 0.5;
};

struct AdaptationStep {
  AdaptationState state;
  bool saturated = false;  // clamp engaged: volume not reachable mechanically
};

/// One update at a breath boundary. When disabled, only k advances.
AdaptationStep adapt_setpoint(const AdaptationState& state, double v_ref, double v_measured,
                              const SetpointLimits& limits);

struct SensitivityCase {
  std::string label;
  std::vector<double> phi;     // rad, spacing delta_phi
  std::vector<double> volume;  // mL
};

struct SensitivityGrid {
  std::vector<SensitivityCase> cases;
  double delta_phi = 0.05;
};

/// Largest forward-difference slope over all cases [mL/rad]. Throws
/// std::invalid_argument when a case is not increasing or has < 2 points.
double estimate_sensitivity(const SensitivityGrid& grid, double monotonicity_tol = 0.0);

/// g = 1/dV; with safety_round, rounded down to one significant figure.
double gain_from_sensitivity(double dv, bool safety_round);

/// Reference bench measurements of the parameter study (disconnected, healthy 5 mBar, ARDS 5 mBar,
/// ARDS 10 mBar; 0.20..0.50 rad in 0.05 steps).
SensitivityGrid reference_parameter_grid();

/// Reads a grid from CSV: header `phi_rad,<label>...`, one row per angle.
SensitivityGrid read_sensitivity_csv(const std::string& path);

using TidalVolumePlant = std::function<double(double)>;

enum class ConvergenceVerdict {
  kConverged,
  kNotMonotone,
  kNotConverged,
  kPreconditionViolated,
};

struct ConvergenceReport {
  ConvergenceVerdict verdict = ConvergenceVerdict::kConverged;
  bool monotone = true;      // never crosses phi_ref, distance non-increasing
  bool converged = false;    // |phi_tgt(n) - phi_ref| <= tolerance
  double phi_ref = 0.0;
  double max_plant_slope = 0.0;
  long breaths_to_tolerance = -1;
  std::string diagnostic;
  std::vector<double> phi_trace;  // phi_tgt(0..n)
};

/// phi_tgt(0..n) from running the adaptation law against `plant`.
std::vector<double> adaptation_trace(const TidalVolumePlant& plant, double v_ref,
                                     const AdaptationState& state0, long n,
                                     const SetpointLimits& limits);

/// True when the trace never crosses phi_ref and its distance to phi_ref
/// never grows.
bool is_monotone_approach(const std::vector<double>& trace, double phi_ref);

/// Bisection for f(phi_ref) = v_ref on the admissible interval.
double solve_reference_setpoint(const TidalVolumePlant& plant, double v_ref,
                                const SetpointLimits& limits);

/// Runs the adaptation law against `plant` for n breaths and checks both
/// the no-crossing monotone approach and the asymptotic convergence. The slope
/// precondition is checked on a grid of `slope_samples` intervals.
ConvergenceReport verify_convergence(const TidalVolumePlant& plant, double v_ref,
                                     const AdaptationState& state0, long n,
                                     const SetpointLimits& limits, double tolerance = 1e-6,
                                     std::size_t slope_samples = 20000);

std::string to_string(ConvergenceVerdict verdict);

}  // namespace ventsim
