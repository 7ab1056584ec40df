#pragma once

// Monte Carlo harness: false-alarm regulation across clutter families,
// detection-probability curves for fluctuating targets in clutter, and a
// synthetic scene builder for end-to-end runs.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wilcfar/clutter.hpp"
#include "wilcfar/detectors.hpp"
#include "wilcfar/metrics.hpp"
#include "wilcfar/rng.hpp"
#include "wilcfar/window.hpp"

namespace wilcfar {

// Coherent sum of a clutter sample and a fluctuating target return: the
// target power is exponential with the given mean (power fluctuates
// independently per sample), both phases are uniform, and the amplitude of
// the complex sum is returned. A zero target mean returns the clutter
// amplitude unchanged.
double simulate_pixel(double clutter_amp, double target_mean_power, Rng& rng);

struct TrialSpec {
  ClutterModel clutter = ClutterModel::rayleigh(1.0);
  const Detector* detector = nullptr;
  WindowGeometry geometry;
  double design_pfa = 1e-3;
  std::vector<double> scr_db;      // signal-to-clutter grid, dB
  std::int64_t trials_per_point = 1000;
  std::uint64_t master_seed = 1;
};

struct PdPoint {
  double scr_db = 0.0;
  double p_d = 0.0;
  double stderr_ = 0.0;  // sqrt(p(1-p)/trials)
  std::int64_t fires = 0;
  std::int64_t trials = 0;
};

struct PdCurve {
  std::vector<PdPoint> points;
  std::string detector;
  double design_pfa = 0.0;
  int m = 0, n = 0;
};

// Per SCR point: fresh reference clutter plus test cells carrying the
// fluctuating target; the SCR is the target mean power over the clutter
// mean power E[c^2]. Each trial draws from a stream derived from
// (master seed, point, trial), so results do not depend on the worker count.
PdCurve run_pd_curve(const TrialSpec&, int workers = 0);

struct RegulationRow {
  std::string family;
  double measured_pfa = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;  // 95% binomial interval around the measurement
  std::int64_t fires = 0;
  std::int64_t trials = 0;
  double achieved_pfa = 0.0;  // exact threshold tail for the rank rule
};

// Firing rate on pure clutter, one row per family.
std::vector<RegulationRow> run_pfa_regulation(std::span<const ClutterModel> families,
                                              const Detector&, const WindowGeometry&,
                                              double design_pfa, std::int64_t trials,
                                              std::uint64_t master_seed, int workers = 0);

struct SceneShip {
  ShipEllipse ellipse;
  double scr_db = 0.0;
};

// Clutter-filled raster with target power injected inside each ellipse.
// Sampled amplitudes are clamped at zero. Overlapping ellipses are an error.
std::pair<Raster, GroundTruth> build_scene(int width, int height, const ClutterModel& clutter,
                                           std::span<const SceneShip> ships,
                                           std::uint64_t seed);

}  // namespace wilcfar
