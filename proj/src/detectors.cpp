#include "wilcfar/detectors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "wilcfar/clutter.hpp"
#include "wilcfar/errors.hpp"
#include "wilcfar/kernels.hpp"

namespace wilcfar {

const char* detector_name(DetectorKind k) {
  switch (k) {
    case DetectorKind::wilcoxon: return "wilcoxon";
    case DetectorKind::two_parameter: return "two_parameter";
    case DetectorKind::weibull: return "weibull";
    case DetectorKind::truncated_gamma: return "truncated_gamma";
    case DetectorKind::trimmed_rayleigh: return "trimmed_rayleigh";
  }
  return "?";
}

std::optional<DetectorKind> detector_from_name(std::string_view name) {
  if (name == "wilcoxon") return DetectorKind::wilcoxon;
  if (name == "two_parameter" || name == "two-parameter") return DetectorKind::two_parameter;
  if (name == "weibull") return DetectorKind::weibull;
  if (name == "truncated_gamma" || name == "ts") return DetectorKind::truncated_gamma;
  if (name == "trimmed_rayleigh") return DetectorKind::trimmed_rayleigh;
  return std::nullopt;
}

void DetectorConfig::validate() const {
  if (!(truncation_ratio >= 0.0) || truncation_ratio >= 1.0)
    throw std::invalid_argument("truncation ratio must be in [0, 1)");
  if (!(trim_factor > 0.0)) throw std::invalid_argument("trim factor must be positive");
  if (shape && !(*shape > 0.0)) throw std::invalid_argument("gamma shape must be positive");
}

namespace {

void check_design_pfa(double pfa) {
  if (!(pfa > 0.0) || !(pfa < 1.0))
    throw std::invalid_argument("design_pfa must be in (0, 1)");
}

void check_single_test(std::span<const double> test) {
  if (test.size() != 1)
    throw std::invalid_argument("parametric rules take a single test pixel");
}

class WilcoxonDetector final : public Detector {
 public:
  WilcoxonDetector(int m, int n) : dist_(shared_distribution(m, n)) {}

  const char* name() const override { return "wilcoxon"; }

  DesignContext design(double pfa) const override {
    check_design_pfa(pfa);
    const RankThreshold th = threshold_for_pfa(*dist_, pfa);
    DesignContext ctx;
    ctx.design_pfa = pfa;
    ctx.achieved_pfa = th.achieved_pfa;
    ctx.rank_threshold = th.t_mw;
    return ctx;
  }

  WindowState window_state(std::span<const double> test,
                           std::span<const double> reference) const override {
    if (test.size() != static_cast<std::size_t>(dist_->m()) ||
        reference.size() != static_cast<std::size_t>(dist_->n()))
      throw std::invalid_argument(
          "rank rule: sample sizes (" + std::to_string(test.size()) + ", " +
          std::to_string(reference.size()) + ") do not match the distribution (" +
          std::to_string(dist_->m()) + ", " + std::to_string(dist_->n()) + ")");
    WindowState s;
    s.stat = static_cast<double>(mann_whitney_statistic(test, reference));
    return s;
  }

  bool decide(const WindowState& s, const DesignContext& ctx) const override {
    return static_cast<std::int64_t>(s.stat) >= ctx.rank_threshold;
  }

 private:
  std::shared_ptr<const ExactRankDistribution> dist_;
};

class TwoParameterDetector final : public Detector {
 public:
  const char* name() const override { return "two_parameter"; }
  int required_test_count() const override { return 1; }

  DesignContext design(double pfa) const override {
    check_design_pfa(pfa);
    DesignContext ctx;
    ctx.design_pfa = ctx.achieved_pfa = pfa;
    ctx.factor = ClutterModel::gaussian(0.0, 1.0).upper_quantile(pfa);
    return ctx;
  }

  WindowState window_state(std::span<const double> test,
                           std::span<const double> reference) const override {
    check_single_test(test);
    if (reference.size() < 2)
      throw std::invalid_argument("two_parameter: need at least 2 reference samples");
    const auto& ops = kernels::active();
    const double n = static_cast<double>(reference.size());
    const double mu = ops.sum(reference.data(), reference.size()) / n;
    const double ex2 = ops.sum_sq(reference.data(), reference.size()) / n;
    const double sigma = std::sqrt(std::max(0.0, ex2 - mu * mu));
    if (sigma == 0.0)
      throw degenerate_reference_error("two_parameter: zero-variance reference");
    return {test[0], mu, sigma};
  }

  bool decide(const WindowState& s, const DesignContext& ctx) const override {
    return s.stat > s.p1 + ctx.factor * s.p2;
  }
};

class WeibullCfarDetector final : public Detector {
 public:
  const char* name() const override { return "weibull"; }
  int required_test_count() const override { return 1; }

  DesignContext design(double pfa) const override {
    check_design_pfa(pfa);
    DesignContext ctx;
    ctx.design_pfa = ctx.achieved_pfa = pfa;
    ctx.factor = -std::log(pfa);
    return ctx;
  }

  WindowState window_state(std::span<const double> test,
                           std::span<const double> reference) const override {
    check_single_test(test);
    if (reference.size() < 2)
      throw std::invalid_argument("weibull: need at least 2 reference samples");
    for (const double y : reference)
      if (!(y > 0.0)) throw degenerate_reference_error("weibull: nonpositive reference sample");
    const WeibullFit fit = weibull_ml(reference);
    return {test[0], fit.shape_c, fit.scale_b};
  }

  bool decide(const WindowState& s, const DesignContext& ctx) const override {
    return s.stat > s.p2 * std::pow(ctx.factor, 1.0 / s.p1);
  }
};

class TruncatedGammaDetector final : public Detector {
 public:
  TruncatedGammaDetector(double truncation_ratio, double shape)
      : truncation_ratio_(truncation_ratio), shape_(shape) {
    if (!(truncation_ratio >= 0.0) || truncation_ratio >= 1.0)
      throw std::invalid_argument("truncation ratio must be in [0, 1)");
    if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be positive");
  }

  const char* name() const override { return "truncated_gamma"; }
  int required_test_count() const override { return 1; }

  DesignContext design(double pfa) const override {
    check_design_pfa(pfa);
    DesignContext ctx;
    ctx.design_pfa = ctx.achieved_pfa = pfa;
    ctx.factor = ClutterModel::gamma(shape_, 1.0).upper_quantile(pfa);
    return ctx;
  }

  WindowState window_state(std::span<const double> test,
                           std::span<const double> reference) const override {
    check_single_test(test);
    if (reference.size() < 10)
      throw std::invalid_argument("truncated_gamma: need at least 10 reference samples");

    static thread_local std::vector<double> sorted;
    sorted.assign(reference.begin(), reference.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t drop =
        static_cast<std::size_t>(std::ceil(truncation_ratio_ * static_cast<double>(sorted.size())));
    if (drop >= sorted.size())
      throw degenerate_reference_error("truncated_gamma: empty post-truncation set");
    const std::size_t kept = sorted.size() - drop;
    const double mean =
        kernels::active().sum(sorted.data(), kept) / static_cast<double>(kept);
    if (!(mean > 0.0))
      throw degenerate_reference_error("truncated_gamma: nonpositive retained mean");

    double theta;
    if (drop == 0) {
      theta = mean / shape_;  // untruncated ML
    } else {
      const double trunc_point = sorted[kept - 1];  // largest retained sample
      theta = truncated_gamma_scale_ml(mean, shape_, trunc_point);
    }
    return {test[0], theta, 0.0};
  }

  bool decide(const WindowState& s, const DesignContext& ctx) const override {
    return s.stat > s.p1 * ctx.factor;
  }

 private:
  double truncation_ratio_;
  double shape_;
};

class TrimmedRayleighDetector final : public Detector {
 public:
  explicit TrimmedRayleighDetector(double trim_factor) : trim_factor_(trim_factor) {
    if (!(trim_factor > 0.0)) throw std::invalid_argument("trim factor must be positive");
  }

  const char* name() const override { return "trimmed_rayleigh"; }
  int required_test_count() const override { return 1; }

  DesignContext design(double pfa) const override {
    check_design_pfa(pfa);
    DesignContext ctx;
    ctx.design_pfa = ctx.achieved_pfa = pfa;
    ctx.factor = std::sqrt(-2.0 * std::log(pfa));
    return ctx;
  }

  WindowState window_state(std::span<const double> test,
                           std::span<const double> reference) const override {
    check_single_test(test);
    if (reference.size() < 10)
      throw std::invalid_argument("trimmed_rayleigh: need at least 10 reference samples");

    static thread_local std::vector<double> kept;
    kept.assign(reference.begin(), reference.end());
    double sigma = 0.0;
    for (int it = 0; it < 20; ++it) {
      if (kept.empty())
        throw degenerate_reference_error("trimmed_rayleigh: all samples trimmed");
      const double ss = kernels::active().sum_sq(kept.data(), kept.size());
      sigma = std::sqrt(ss / (2.0 * static_cast<double>(kept.size())));
      const double cut = trim_factor_ * sigma * std::sqrt(2.0);  // trim beyond the RMS amplitude
      const auto end = std::remove_if(kept.begin(), kept.end(),
                                      [cut](double x) { return x > cut; });
      if (end == kept.end()) break;
      kept.erase(end, kept.end());
    }
    if (kept.empty())
      throw degenerate_reference_error("trimmed_rayleigh: all samples trimmed");
    if (sigma == 0.0)
      throw degenerate_reference_error("trimmed_rayleigh: zero-variance reference");
    return {test[0], sigma, 0.0};
  }

  bool decide(const WindowState& s, const DesignContext& ctx) const override {
    return s.stat > s.p1 * ctx.factor;
  }

 private:
  double trim_factor_;
};

}  // namespace

std::unique_ptr<Detector> make_wilcoxon(int m, int n) {
  return std::make_unique<WilcoxonDetector>(m, n);
}
std::unique_ptr<Detector> make_two_parameter() {
  return std::make_unique<TwoParameterDetector>();
}
std::unique_ptr<Detector> make_weibull_cfar() {
  return std::make_unique<WeibullCfarDetector>();
}
std::unique_ptr<Detector> make_truncated_gamma(double truncation_ratio, double shape) {
  return std::make_unique<TruncatedGammaDetector>(truncation_ratio, shape);
}
std::unique_ptr<Detector> make_trimmed_rayleigh(double trim_factor) {
  return std::make_unique<TrimmedRayleighDetector>(trim_factor);
}

double resolve_gamma_shape(const DetectorConfig& config, const Raster* raster) {
  if (config.shape) return *config.shape;
  if (!raster)
    throw std::invalid_argument(
        "truncated_gamma: no fixed shape given and no raster to estimate one from");
  std::vector<double> px(raster->samples().begin(), raster->samples().end());
  if (config.shape_mode == DetectorConfig::ShapeMode::enl) return estimate_enl(px);
  std::vector<double> pos;
  pos.reserve(px.size());
  for (const double v : px)
    if (v > 0.0) pos.push_back(v);
  return gamma_ml_shape(pos);
}

std::unique_ptr<Detector> make_detector(const DetectorConfig& config,
                                        const WindowGeometry& geometry,
                                        const Raster* raster) {
  config.validate();
  geometry.validate();
  switch (config.kind) {
    case DetectorKind::wilcoxon:
      return make_wilcoxon(geometry.test_count(), geometry.reference_count());
    case DetectorKind::two_parameter:
      return make_two_parameter();
    case DetectorKind::weibull:
      return make_weibull_cfar();
    case DetectorKind::truncated_gamma:
      return make_truncated_gamma(config.truncation_ratio,
                                  resolve_gamma_shape(config, raster));
    case DetectorKind::trimmed_rayleigh:
      return make_trimmed_rayleigh(config.trim_factor);
  }
  throw std::logic_error("unreachable");
}

namespace {

void check_test_window(const WindowGeometry& geometry, const Detector& detector) {
  if (detector.required_test_count() > 0 &&
      geometry.test_count() != detector.required_test_count())
    throw std::invalid_argument(std::string(detector.name()) + " requires a test window of " +
                                std::to_string(detector.required_test_count()) + " pixel(s)");
}

}  // namespace

DetectionRun run_detector(const Raster& raster, const WindowGeometry& geometry,
                          const Detector& detector, double design_pfa,
                          const RunOptions& options) {
  check_test_window(geometry, detector);
  const DesignContext ctx = detector.design(design_pfa);
  return run_windows(
      raster, geometry,
      [&](std::span<const double> test, std::span<const double> ref) {
        return detector.decide(detector.window_state(test, ref), ctx);
      },
      options);
}

WindowStateGrid compute_window_states(const Raster& raster, const WindowGeometry& geometry,
                                      const Detector& detector, const RunOptions& options) {
  geometry.validate();
  check_test_window(geometry, detector);
  WindowStateGrid grid;
  grid.geometry = geometry;
  grid.width = raster.width();
  grid.height = raster.height();

  // same sweep semantics as run_windows: anchor lattice, degenerate-skip
  // policy, and errors carrying the window coordinates
  const int off = geometry.guard + geometry.ring_depth;
  const int s = geometry.stride;
  const int last_x = raster.width() - geometry.test_side - off;
  const int last_y = raster.height() - geometry.test_side - off;
  if (last_x < off || last_y < off)
    throw std::invalid_argument("raster cannot fit a window of side " +
                                std::to_string(geometry.side()));
  const std::size_t cols = static_cast<std::size_t>((last_x - off) / s) + 1;
  const std::size_t rows = static_cast<std::size_t>((last_y - off) / s) + 1;
  grid.entries.assign(rows * cols, {});

  std::atomic<std::int64_t> degenerate{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;

  int workers = options.workers > 0 ? options.workers
                                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers),
                                                   std::max<std::size_t>(rows, 1)));

  auto worker = [&](int wi) {
    std::vector<double> test(geometry.test_count());
    std::vector<double> ref(geometry.reference_count());
    std::int64_t local_degenerate = 0;
    for (std::size_t r = wi; r < rows; r += workers) {
      if (failed.load(std::memory_order_relaxed)) break;
      const int ay = off + static_cast<int>(r) * s;
      for (std::size_t c = 0; c < cols; ++c) {
        const int ax = off + static_cast<int>(c) * s;
        auto& entry = grid.entries[r * cols + c];
        entry.ax = ax;
        entry.ay = ay;
        try {
          extract_window(raster, geometry, ax, ay, test, ref);
          entry.state = detector.window_state(test, ref);
          entry.valid = true;
        } catch (const degenerate_reference_error&) {
          if (!options.skip_degenerate) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!first_error)
              first_error = std::make_exception_ptr(degenerate_reference_error(
                  "window anchored at (" + std::to_string(ax) + ", " + std::to_string(ay) +
                  "): degenerate reference"));
            failed.store(true, std::memory_order_relaxed);
            break;
          }
          entry.valid = false;
          ++local_degenerate;
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error)
            first_error = std::make_exception_ptr(std::runtime_error(
                "window anchored at (" + std::to_string(ax) + ", " + std::to_string(ay) +
                "): " + e.what()));
          failed.store(true, std::memory_order_relaxed);
          break;
        }
      }
    }
    degenerate += local_degenerate;
  };

  if (workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int wi = 0; wi < workers; ++wi) pool.emplace_back(worker, wi);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  grid.degenerate = degenerate.load();
  return grid;
}

DetectionRun decide_with_states(const WindowStateGrid& grid, const Detector& detector,
                                double design_pfa) {
  const DesignContext ctx = detector.design(design_pfa);
  const int t = grid.geometry.test_side;

  DetectionRun out;
  out.map = DetectionMap(grid.width, grid.height);
  out.degenerate = grid.degenerate;
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(grid.width) * grid.height, 0);
  for (const auto& entry : grid.entries) {
    const bool fire = entry.valid && detector.decide(entry.state, ctx);
    ++out.windows;
    if (fire) ++out.fired;
    const std::uint8_t mark = fire ? 0x3 : 0x1;
    for (int y = 0; y < t; ++y) {
      std::uint8_t* row = cells.data() + static_cast<std::size_t>(entry.ay + y) * grid.width;
      for (int x = 0; x < t; ++x) row[entry.ax + x] |= mark;
    }
  }
  for (int y = 0; y < grid.height; ++y)
    for (int x = 0; x < grid.width; ++x) {
      const std::uint8_t v = cells[static_cast<std::size_t>(y) * grid.width + x];
      if (v & 0x2)
        out.map.set(x, y, PixelState::detected);
      else if (v & 0x1)
        out.map.set(x, y, PixelState::clear);
    }
  return out;
}

}  // namespace wilcfar
