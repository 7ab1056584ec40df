#include "wilcfar/window.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "wilcfar/errors.hpp"

namespace wilcfar {

void WindowGeometry::validate() const {
  if (test_side < 1) throw std::invalid_argument("window geometry: test side must be >= 1");
  if (guard < 0) throw std::invalid_argument("window geometry: guard width must be >= 0");
  if (ring_depth < 1) throw std::invalid_argument("window geometry: ring depth must be >= 1");
  if (stride < 1) throw std::invalid_argument("window geometry: stride must be >= 1");
}

Raster::Raster(int width, int height, float fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw std::invalid_argument("raster dimensions must be positive");
  samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

Raster Raster::from_samples(int width, int height, std::vector<float> samples) {
  if (width < 1 || height < 1) throw std::invalid_argument("raster dimensions must be positive");
  if (samples.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("raster sample count does not match dimensions");
  for (const float v : samples)
    if (!std::isfinite(v) || v < 0.0f)
      throw std::invalid_argument("raster samples must be finite and nonnegative");
  Raster r;
  r.width_ = width;
  r.height_ = height;
  r.samples_ = std::move(samples);
  return r;
}

std::int64_t DetectionMap::count(PixelState s) const {
  std::int64_t c = 0;
  for (const auto v : states_)
    if (v == static_cast<std::uint8_t>(s)) ++c;
  return c;
}

void extract_window(const Raster& raster, const WindowGeometry& geometry,
                    int anchor_x, int anchor_y, std::span<double> test_out,
                    std::span<double> reference_out) {
  const int l = geometry.side();
  const int q = geometry.ring_depth;
  const int t = geometry.test_side;
  const int off = geometry.guard + geometry.ring_depth;
  const int wx0 = anchor_x - off;
  const int wy0 = anchor_y - off;
  if (wx0 < 0 || wy0 < 0 || wx0 + l > raster.width() || wy0 + l > raster.height())
    throw std::out_of_range("window anchored at (" + std::to_string(anchor_x) + ", " +
                            std::to_string(anchor_y) + ") overruns the raster");
  if (test_out.size() != static_cast<std::size_t>(geometry.test_count()) ||
      reference_out.size() != static_cast<std::size_t>(geometry.reference_count()))
    throw std::invalid_argument("extract_window: output span sizes do not match geometry");

  const std::span<const float> px = raster.samples();
  const int w = raster.width();

  std::size_t ti = 0;
  for (int y = 0; y < t; ++y) {
    const float* row = px.data() + static_cast<std::size_t>(anchor_y + y) * w + anchor_x;
    for (int x = 0; x < t; ++x) test_out[ti++] = row[x];
  }

  std::size_t ri = 0;
  for (int y = 0; y < l; ++y) {
    const float* row = px.data() + static_cast<std::size_t>(wy0 + y) * w + wx0;
    if (y < q || y >= l - q) {
      for (int x = 0; x < l; ++x) reference_out[ri++] = row[x];
    } else {
      for (int x = 0; x < q; ++x) reference_out[ri++] = row[x];
      for (int x = l - q; x < l; ++x) reference_out[ri++] = row[x];
    }
  }
}

namespace {

// Two monotone bits per pixel; OR-merge makes the sweep order-independent.
constexpr std::uint8_t kEvaluatedBit = 0x1;
constexpr std::uint8_t kDetectedBit = 0x2;

}  // namespace

DetectionRun run_windows(const Raster& raster, const WindowGeometry& geometry,
                         const WindowRule& rule, const RunOptions& options) {
  geometry.validate();
  const int l = geometry.side();
  if (raster.width() < l || raster.height() < l)
    throw std::invalid_argument("raster (" + std::to_string(raster.width()) + "x" +
                                std::to_string(raster.height()) +
                                ") cannot fit a window of side " + std::to_string(l));

  const int off = geometry.guard + geometry.ring_depth;
  const int t = geometry.test_side;
  const int s = geometry.stride;
  const int last_x = raster.width() - t - off;   // largest valid anchor x
  const int last_y = raster.height() - t - off;

  std::vector<int> anchor_rows;
  for (int ay = off; ay <= last_y; ay += s) anchor_rows.push_back(ay);

  std::vector<std::uint8_t> cells(raster.size(), 0);

  int workers = options.workers > 0 ? options.workers
                                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = static_cast<int>(std::min<std::size_t>(
      static_cast<std::size_t>(workers), std::max<std::size_t>(anchor_rows.size(), 1)));

  std::atomic<std::int64_t> windows{0}, fired{0}, degenerate{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto worker = [&](int wi) {
    std::vector<double> test(geometry.test_count());
    std::vector<double> ref(geometry.reference_count());
    std::int64_t local_windows = 0, local_fired = 0, local_degenerate = 0;
    for (std::size_t r = wi; r < anchor_rows.size(); r += workers) {
      if (failed.load(std::memory_order_relaxed)) break;
      const int ay = anchor_rows[r];
      for (int ax = off; ax <= last_x; ax += s) {
        bool fire;
        try {
          extract_window(raster, geometry, ax, ay, test, ref);
          fire = rule(test, ref);
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
          ++local_degenerate;
          fire = false;
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error)
            first_error = std::make_exception_ptr(std::runtime_error(
                "window anchored at (" + std::to_string(ax) + ", " + std::to_string(ay) +
                "): " + e.what()));
          failed.store(true, std::memory_order_relaxed);
          break;
        }
        ++local_windows;
        if (fire) ++local_fired;
        const std::uint8_t mark = fire ? (kEvaluatedBit | kDetectedBit) : kEvaluatedBit;
        for (int y = 0; y < t; ++y) {
          std::uint8_t* row =
              cells.data() + static_cast<std::size_t>(ay + y) * raster.width() + ax;
          for (int x = 0; x < t; ++x)
            std::atomic_ref<std::uint8_t>(row[x]).fetch_or(mark, std::memory_order_relaxed);
        }
      }
    }
    windows += local_windows;
    fired += local_fired;
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

  DetectionRun out;
  out.map = DetectionMap(raster.width(), raster.height());
  for (int y = 0; y < raster.height(); ++y)
    for (int x = 0; x < raster.width(); ++x) {
      const std::uint8_t v = cells[static_cast<std::size_t>(y) * raster.width() + x];
      if (v & kDetectedBit)
        out.map.set(x, y, PixelState::detected);
      else if (v & kEvaluatedBit)
        out.map.set(x, y, PixelState::clear);
    }
  out.windows = windows.load();
  out.fired = fired.load();
  out.degenerate = degenerate.load();
  return out;
}

}  // namespace wilcfar
