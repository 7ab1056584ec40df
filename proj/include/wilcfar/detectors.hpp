#pragma once

// Decision rules: the rank-sum (Wilcoxon / Mann-Whitney) nonparametric rule
// with its exact threshold, and four parametric baselines (two-parameter
// Gaussian, Weibull-ML, truncated-Gamma with known shape, trimmed Rayleigh).
//
// Every rule is split into a per-design context (threshold constants,
// computed once per run) and a per-window state (statistics and fitted
// parameters). decide(test, reference, pfa) is the composition of the two,
// so sweeping many design rates over one raster can reuse the per-window
// fits without any second code path.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>

#include "wilcfar/rank.hpp"
#include "wilcfar/window.hpp"

namespace wilcfar {

class Raster;

enum class DetectorKind { wilcoxon, two_parameter, weibull, truncated_gamma, trimmed_rayleigh };

const char* detector_name(DetectorKind);
std::optional<DetectorKind> detector_from_name(std::string_view);

struct DetectorConfig {
  DetectorKind kind = DetectorKind::wilcoxon;
  double truncation_ratio = 0.10;  // truncated_gamma
  double trim_factor = 2.0;        // trimmed_rayleigh
  enum class ShapeMode { enl, ml } shape_mode = ShapeMode::enl;  // truncated_gamma
  std::optional<double> shape;     // fixed Gamma shape; overrides shape_mode
  void validate() const;
};

struct DesignContext {
  double design_pfa = 0.0;
  double achieved_pfa = 0.0;       // exact tail for the rank rule, = design otherwise
  double factor = 0.0;             // detector-specific threshold constant
  std::int64_t rank_threshold = 0; // t_mw for the rank rule
};

struct WindowState {
  double stat = 0.0;  // rank statistic, or the test pixel for parametric rules
  double p1 = 0.0;    // fitted location / scale
  double p2 = 0.0;
};

class Detector {
 public:
  virtual ~Detector() = default;
  virtual const char* name() const = 0;
  // 1 for the single-pixel parametric rules, 0 for "any".
  virtual int required_test_count() const { return 0; }
  virtual DesignContext design(double design_pfa) const = 0;
  virtual WindowState window_state(std::span<const double> test,
                                   std::span<const double> reference) const = 0;
  virtual bool decide(const WindowState&, const DesignContext&) const = 0;

  bool decide(std::span<const double> test, std::span<const double> reference,
              double design_pfa) const {
    return decide(window_state(test, reference), design(design_pfa));
  }
};

std::unique_ptr<Detector> make_wilcoxon(int m, int n);
std::unique_ptr<Detector> make_two_parameter();
std::unique_ptr<Detector> make_weibull_cfar();
std::unique_ptr<Detector> make_truncated_gamma(double truncation_ratio, double shape);
std::unique_ptr<Detector> make_trimmed_rayleigh(double trim_factor);

// Gamma shape for the truncated-Gamma rule: the configured fixed value if
// present, otherwise estimated globally from the raster (ENL of the pixel
// intensities, or a global ML shape fit, per shape_mode).
double resolve_gamma_shape(const DetectorConfig&, const Raster* raster);

// Builds the configured rule; the rank rule takes its (m, n) from the
// geometry. `raster` is only consulted for the truncated-Gamma shape.
std::unique_ptr<Detector> make_detector(const DetectorConfig&, const WindowGeometry&,
                                        const Raster* raster = nullptr);

// Sweeps the raster with the rule at one design rate.
DetectionRun run_detector(const Raster&, const WindowGeometry&, const Detector&,
                          double design_pfa, const RunOptions& = {});

// Per-window states for a whole raster, computed once. Re-deciding at
// another design rate is then a cheap threshold comparison per window, which
// is what makes ROC sweeps and matched-rate searches affordable; the
// decisions are identical to run_detector's by construction.
struct WindowStateGrid {
  WindowGeometry geometry;
  int width = 0, height = 0;
  struct Entry {
    int ax = 0, ay = 0;
    WindowState state;
    bool valid = false;  // false = degenerate window, always clear
  };
  std::vector<Entry> entries;
  std::int64_t degenerate = 0;
};

WindowStateGrid compute_window_states(const Raster&, const WindowGeometry&, const Detector&,
                                      const RunOptions& = {});
DetectionRun decide_with_states(const WindowStateGrid&, const Detector&, double design_pfa);

}  // namespace wilcfar
