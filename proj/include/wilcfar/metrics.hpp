#pragma once

// Scoring of detection maps against elliptical ground truth: actual
// false-alarm rate over the background, per-ship detection probability,
// and ROC sweeps over a list of design rates.

#include <cstdint>
#include <span>
#include <vector>

#include "wilcfar/detectors.hpp"
#include "wilcfar/window.hpp"

namespace wilcfar {

struct ShipEllipse {
  double cx = 0.0, cy = 0.0;   // center, pixel coordinates
  double a = 0.0, b = 0.0;     // full major / minor axes, a >= b > 0
  double theta_deg = 0.0;      // major-axis orientation
  // Analytic pixel count of the ship body, round(pi*a*b/4).
  std::int64_t analytic_area() const;
};

struct GroundTruth {
  int width = 0, height = 0;
  std::vector<ShipEllipse> ships;
};

// Pixel indices (y*width + x) whose centers lie strictly inside each
// ellipse. Throws std::out_of_range when an ellipse leaves the image and
// std::invalid_argument on degenerate axes.
std::vector<std::vector<std::int64_t>> ellipse_masks(const GroundTruth&);

struct ShipScore {
  std::int64_t n_d = 0;  // detected pixels inside the mask
  std::int64_t n_s = 0;  // analytic ship area
  double p_d = 0.0;      // n_d / n_s, clamped to 1
};

struct EvalResult {
  std::int64_t n_fa = 0;  // detected pixels outside every ship mask
  std::int64_t n_c = 0;   // background pixel count
  double p_fa = 0.0;
  std::vector<ShipScore> ships;
  double aggregate_p_d = 0.0;
};

// Background count is width*height minus the analytic ship areas minus any
// unevaluated pixels outside the masks; unevaluated pixels contribute to
// neither numerator nor denominator.
EvalResult evaluate(const DetectionMap&, const GroundTruth&);

struct RocRow {
  double design_pfa = 0.0;
  EvalResult eval;
};

// Runs detection and scoring once per design rate, ascending.
std::vector<RocRow> roc_sweep(const Raster&, const WindowGeometry&, const Detector&,
                              const GroundTruth&, std::span<const double> design_pfas,
                              const RunOptions& = {});

}  // namespace wilcfar
