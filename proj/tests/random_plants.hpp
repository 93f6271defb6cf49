#pragma once

// Random bounded, strictly increasing piecewise-linear tidal-volume plants
// for the adaptation convergence property tests.

#include <algorithm>
#include <vector>

#include "ventsim/adaptation.hpp"
#include "ventsim/rng.hpp"

namespace ventsim::testing {

struct RandomPlant {
  std::vector<double> knots;    // phi, ascending, spans [phi_min, phi_max]
  std::vector<double> volumes;  // at the knots
  double max_slope = 0.0;

  double operator()(double phi) const {
    phi = std::clamp(phi, knots.front(), knots.back());
    const auto it = std::upper_bound(knots.begin(), knots.end(), phi);
    const std::size_t i = std::min<std::size_t>(
        static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - knots.begin(), 1)), knots.size() - 1);
    const double t = (phi - knots[i - 1]) / (knots[i] - knots[i - 1]);
    return volumes[i - 1] + t * (volumes[i] - volumes[i - 1]);
  }
};

/// Segment slopes drawn in [min_fraction, 1] * dv; one segment hits dv exactly.
inline RandomPlant make_random_plant(Rng& rng, double dv, const SetpointLimits& limits,
                                     double min_fraction = 0.1) {
  RandomPlant p;
  const int segments = 2 + static_cast<int>(rng.uniform() * 9.0);
  std::vector<double> cuts;
  for (int i = 0; i < segments - 1; ++i) {
    cuts.push_back(limits.phi_min + (limits.phi_max - limits.phi_min) * rng.uniform());
  }
  std::sort(cuts.begin(), cuts.end());
  p.knots.push_back(limits.phi_min);
  for (double c : cuts) {
    if (c - p.knots.back() > 1e-6 && limits.phi_max - c > 1e-6) p.knots.push_back(c);
  }
  p.knots.push_back(limits.phi_max);
  p.volumes.push_back(50.0 + 100.0 * rng.uniform());
  const std::size_t steep = static_cast<std::size_t>(rng.uniform() * (p.knots.size() - 1));
  for (std::size_t i = 1; i < p.knots.size(); ++i) {
    const double frac = i - 1 == steep ? 1.0 : min_fraction + (1.0 - min_fraction) * rng.uniform();
    const double slope = frac * dv;
    p.max_slope = std::max(p.max_slope, slope);
    p.volumes.push_back(p.volumes.back() + slope * (p.knots[i] - p.knots[i - 1]));
  }
  return p;
}

}  // namespace ventsim::testing
