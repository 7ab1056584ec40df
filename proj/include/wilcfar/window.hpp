#pragma once

// Sliding-window machinery: geometry of the test / guard / reference layout,
// the raster and per-pixel detection map containers, window extraction, and
// the multithreaded anchor sweep.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace wilcfar {

// A square window of side l = t + 2g + 2q: a t-by-t test block in the
// middle, a guard band of width g around it, and a reference ring of depth
// q rows/columns at the boundary. The anchor of a window is the top-left
// pixel of its test block.
struct WindowGeometry {
  int test_side = 1;   // t
  int guard = 0;       // g
  int ring_depth = 1;  // q
  int stride = 1;      // s

  int side() const { return test_side + 2 * (guard + ring_depth); }
  int test_count() const { return test_side * test_side; }
  int reference_count() const {
    const int l = side();
    const int inner = l - 2 * ring_depth;
    return l * l - inner * inner;
  }
  void validate() const;  // throws std::invalid_argument
};

class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, float fill = 0.0f);
  // Takes ownership; verifies the count and that every sample is finite
  // and nonnegative.
  static Raster from_samples(int width, int height, std::vector<float> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return samples_.size(); }
  float at(int x, int y) const { return samples_[static_cast<std::size_t>(y) * width_ + x]; }
  void set(int x, int y, float v) { samples_[static_cast<std::size_t>(y) * width_ + x] = v; }
  std::span<const float> samples() const { return samples_; }
  std::span<float> samples() { return samples_; }

 private:
  int width_ = 0, height_ = 0;
  std::vector<float> samples_;
};

enum class PixelState : std::uint8_t { not_evaluated = 0, clear = 1, detected = 2 };

class DetectionMap {
 public:
  DetectionMap() = default;
  DetectionMap(int width, int height)
      : width_(width), height_(height),
        states_(static_cast<std::size_t>(width) * height,
                static_cast<std::uint8_t>(PixelState::not_evaluated)) {}

  int width() const { return width_; }
  int height() const { return height_; }
  PixelState at(int x, int y) const {
    return static_cast<PixelState>(states_[static_cast<std::size_t>(y) * width_ + x]);
  }
  void set(int x, int y, PixelState s) {
    states_[static_cast<std::size_t>(y) * width_ + x] = static_cast<std::uint8_t>(s);
  }
  std::int64_t count(PixelState s) const;
  std::span<const std::uint8_t> raw() const { return states_; }
  bool operator==(const DetectionMap&) const = default;

 private:
  int width_ = 0, height_ = 0;
  std::vector<std::uint8_t> states_;
};

// Copies the test block and the reference ring (row-major, guard discarded)
// for the window anchored at (anchor_x, anchor_y). Output spans must have
// exactly test_count() and reference_count() elements. Throws
// std::out_of_range if the window overruns the raster.
void extract_window(const Raster& raster, const WindowGeometry& geometry,
                    int anchor_x, int anchor_y, std::span<double> test_out,
                    std::span<double> reference_out);

struct RunOptions {
  int workers = 0;             // 0 = all hardware threads
  bool skip_degenerate = false;  // degenerate windows become clear instead of fatal
};

struct DetectionRun {
  DetectionMap map;
  std::int64_t windows = 0;     // anchors evaluated
  std::int64_t fired = 0;       // windows whose rule fired
  std::int64_t degenerate = 0;  // windows skipped under skip_degenerate
};

using WindowRule =
    std::function<bool(std::span<const double> test, std::span<const double> reference)>;

// Sweeps all valid anchors with the geometry's stride. Where the rule fires,
// the whole test block is marked detected; overlapping windows OR-merge.
// Pixels never covered by an evaluated test block stay not_evaluated. The
// result is identical for any worker count.
DetectionRun run_windows(const Raster& raster, const WindowGeometry& geometry,
                         const WindowRule& rule, const RunOptions& options = {});

}  // namespace wilcfar
