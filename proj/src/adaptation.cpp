#include "ventsim/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ventsim/errors.hpp"

namespace ventsim {

AdaptationStep adapt_setpoint(const AdaptationState& state, double v_ref, double v_measured,
                              const SetpointLimits& limits) {
  AdaptationStep out{state, false};
  out.state.k = state.k + 1;
  if (!state.enabled) return out;
  const double proposed = state.phi_tgt + state.gain * (v_ref - v_measured);
  out.state.phi_tgt = std::clamp(proposed, limits.phi_min, limits.phi_max);
  out.saturated = out.state.phi_tgt != proposed;
  return out;
}

double estimate_sensitivity(const SensitivityGrid& grid, double monotonicity_tol) {
  if (!(grid.delta_phi > 0.0)) throw std::invalid_argument("sensitivity grid: delta_phi <= 0");
  if (grid.cases.empty()) throw std::invalid_argument("sensitivity grid: no cases");
  double dv = 0.0;
  for (const auto& c : grid.cases) {
    if (c.volume.size() < 2 || c.volume.size() != c.phi.size()) {
      throw std::invalid_argument("sensitivity grid: case '" + c.label +
                                  "' needs >= 2 matching samples");
    }
    for (std::size_t j = 0; j + 1 < c.volume.size(); ++j) {
      const double step = c.phi[j + 1] - c.phi[j];
      if (std::abs(step - grid.delta_phi) > 1e-9) {
        throw std::invalid_argument("sensitivity grid: case '" + c.label +
                                    "' spacing differs from delta_phi");
      }
      const double dvol = c.volume[j + 1] - c.volume[j];
      if (dvol <= -monotonicity_tol || (monotonicity_tol == 0.0 && dvol <= 0.0)) {
        throw std::invalid_argument("sensitivity grid: case '" + c.label +
                                    "' is not increasing in phi");
      }
      dv = std::max(dv, dvol / grid.delta_phi);
    }
  }
  if (!(dv > 0.0)) throw std::invalid_argument("sensitivity grid: zero sensitivity");
  return dv;
}

double gain_from_sensitivity(double dv, bool safety_round) {
  if (!(dv > 0.0)) throw std::invalid_argument("gain_from_sensitivity: dV must be positive");
  const double g = 1.0 / dv;
  if (!safety_round) return g;
  const double scale = std::pow(10.0, std::floor(std::log10(g)));
  // The relative nudge keeps exact powers of ten from flooring one digit low.
  const double digit = std::floor(g / scale * (1.0 + 1e-12));
  return digit * scale;
}

SensitivityGrid reference_parameter_grid() {
  const std::vector<double> phi{0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50};
  SensitivityGrid grid;
  grid.delta_phi = 0.05;
  grid.cases = {
      {"disconnected", phi, {197, 260, 340, 428, 488, 506, 517}},
      {"healthy/5", phi, {101, 161, 225, 292, 365, 444, 503}},
      {"ards/5", phi, {78, 136, 200, 268, 338, 412, 474}},
      {"ards/10", phi, {58, 118, 176, 243, 315, 397, 453}},
  };
  return grid;
}

SensitivityGrid read_sensitivity_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sensitivity grid '" + path + "'");
  std::string line;
  SensitivityGrid grid;
  std::vector<double> phis;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (header) {
      if (cells.size() < 2) throw ConfigError(path + ": header needs phi and >= 1 case column");
      for (std::size_t i = 1; i < cells.size(); ++i) grid.cases.push_back({cells[i], {}, {}});
      header = false;
      continue;
    }
    if (cells.size() != grid.cases.size() + 1) {
      throw ConfigError(path + ": row has " + std::to_string(cells.size()) + " cells");
    }
    try {
      const double phi = std::stod(cells[0]);
      phis.push_back(phi);
      for (std::size_t i = 1; i < cells.size(); ++i) {
        grid.cases[i - 1].phi.push_back(phi);
        grid.cases[i - 1].volume.push_back(std::stod(cells[i]));
      }
    } catch (const std::logic_error&) {
      throw ConfigError(path + ": non-numeric cell in row '" + line + "'");
    }
  }
  if (phis.size() < 2) throw ConfigError(path + ": need at least two rows");
  grid.delta_phi = phis[1] - phis[0];
  return grid;
}

namespace {

// Bisection leaves phi_ref uncertain by ~1e-15; crossings below that are noise.
constexpr double kSlack = 1e-12;

}  // namespace

double solve_reference_setpoint(const TidalVolumePlant& plant, double v_ref,
                                const SetpointLimits& limits) {
  double lo = limits.phi_min;
  double hi = limits.phi_max;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (plant(mid) < v_ref) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> adaptation_trace(const TidalVolumePlant& plant, double v_ref,
                                     const AdaptationState& state0, long n,
                                     const SetpointLimits& limits) {
  AdaptationState state = state0;
  state.enabled = true;
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(n) + 1);
  trace.push_back(state.phi_tgt);
  for (long k = 0; k < n; ++k) {
    state = adapt_setpoint(state, v_ref, plant(state.phi_tgt), limits).state;
    trace.push_back(state.phi_tgt);
  }
  return trace;
}

bool is_monotone_approach(const std::vector<double>& trace, double phi_ref) {
  for (std::size_t k = 1; k < trace.size(); ++k) {
    const double before = trace[k - 1] - phi_ref;
    const double after = trace[k] - phi_ref;
    const bool crossed = (before > kSlack && after < -kSlack) || (before < -kSlack && after > kSlack);
    if (crossed || std::abs(after) > std::abs(before) + kSlack) return false;
  }
  return true;
}

ConvergenceReport verify_convergence(const TidalVolumePlant& plant, double v_ref,
                                     const AdaptationState& state0, long n,
                                     const SetpointLimits& limits, double tolerance,
                                     std::size_t slope_samples) {
  ConvergenceReport report;
  const double span = limits.phi_max - limits.phi_min;
  const double h = span / static_cast<double>(slope_samples);
  double prev = plant(limits.phi_min);
  for (std::size_t i = 1; i <= slope_samples; ++i) {
    const double v = plant(limits.phi_min + h * static_cast<double>(i));
    if (!(v > prev)) {
      report.verdict = ConvergenceVerdict::kPreconditionViolated;
      report.diagnostic = "plant is not strictly increasing";
      return report;
    }
    report.max_plant_slope = std::max(report.max_plant_slope, (v - prev) / h);
    prev = v;
  }
  if (!(state0.gain > 0.0) || report.max_plant_slope * state0.gain > 1.0 + 1e-9) {
    report.verdict = ConvergenceVerdict::kPreconditionViolated;
    report.diagnostic = "gain too large for plant slope (slope * gain = " +
                        std::to_string(report.max_plant_slope * state0.gain) + ")";
    return report;
  }
  if (v_ref < plant(limits.phi_min) || v_ref > plant(limits.phi_max)) {
    report.verdict = ConvergenceVerdict::kPreconditionViolated;
    report.diagnostic = "reference volume not attainable";
    return report;
  }
  report.phi_ref = solve_reference_setpoint(plant, v_ref, limits);
  report.phi_trace = adaptation_trace(plant, v_ref, state0, n, limits);
  report.monotone = is_monotone_approach(report.phi_trace, report.phi_ref);
  for (std::size_t k = 0; k < report.phi_trace.size(); ++k) {
    if (std::abs(report.phi_trace[k] - report.phi_ref) <= tolerance) {
      report.breaths_to_tolerance = static_cast<long>(k);
      break;
    }
  }
  report.converged = std::abs(report.phi_trace.back() - report.phi_ref) <= tolerance;
  if (!report.monotone) {
    report.verdict = ConvergenceVerdict::kNotMonotone;
  } else if (!report.converged) {
    report.verdict = ConvergenceVerdict::kNotConverged;
  }
  return report;
}

std::string to_string(ConvergenceVerdict verdict) {
  switch (verdict) {
    case ConvergenceVerdict::kConverged: return "converged";
    case ConvergenceVerdict::kNotMonotone: return "not-monotone";
    case ConvergenceVerdict::kNotConverged: return "not-converged";
    case ConvergenceVerdict::kPreconditionViolated: return "precondition-violated";
  }
  return "unknown";
}

}  // namespace ventsim
