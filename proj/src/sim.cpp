#include "wilcfar/sim.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace wilcfar {

namespace {

// Stream tags keep the harness functions on disjoint substreams of one
// master seed.
constexpr std::uint64_t kTagPd = 0x7064;
constexpr std::uint64_t kTagRegulation = 0x7266;
constexpr std::uint64_t kTagSceneClutter = 0x7363;
constexpr std::uint64_t kTagSceneShip = 0x7368;

// Counts fires over [0, trials) with per-trial derived streams; the sum is
// order-independent, so any worker count gives the same result.
template <class TrialFn>
std::int64_t count_fires(std::int64_t trials, int workers, TrialFn&& trial) {
  if (workers < 1) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;

  std::atomic<std::int64_t> fires{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto body = [&](int wi) {
    std::int64_t local = 0;
    for (std::int64_t it = wi; it < trials; it += workers) {
      if (failed.load(std::memory_order_relaxed)) break;
      try {
        if (trial(it)) ++local;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        break;
      }
    }
    fires += local;
  };

  if (workers == 1 || trials < 2 * workers) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int wi = 0; wi < workers; ++wi) pool.emplace_back(body, wi);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return fires.load();
}

}  // namespace

double simulate_pixel(double clutter_amp, double target_mean_power, Rng& rng) {
  if (!(clutter_amp >= 0.0) || !(target_mean_power >= 0.0))
    throw std::invalid_argument("simulate_pixel: amplitudes and powers must be nonnegative");
  if (target_mean_power == 0.0) return clutter_amp;
  const double s = std::sqrt(rng.exponential(target_mean_power));
  const double phi_c = 2.0 * M_PI * rng.uniform01();
  const double phi_s = 2.0 * M_PI * rng.uniform01();
  const double re = clutter_amp * std::cos(phi_c) + s * std::cos(phi_s);
  const double im = clutter_amp * std::sin(phi_c) + s * std::sin(phi_s);
  return std::sqrt(re * re + im * im);
}

PdCurve run_pd_curve(const TrialSpec& spec, int workers) {
  if (!spec.detector) throw std::invalid_argument("run_pd_curve: no detector");
  if (spec.trials_per_point < 1) throw std::invalid_argument("run_pd_curve: trials must be >= 1");
  if (spec.scr_db.empty()) throw std::invalid_argument("run_pd_curve: empty SCR grid");
  spec.geometry.validate();

  const int m = spec.geometry.test_count();
  const int n = spec.geometry.reference_count();
  const Detector& det = *spec.detector;
  const DesignContext ctx = det.design(spec.design_pfa);
  const double clutter_power = spec.clutter.second_moment();

  PdCurve curve;
  curve.detector = det.name();
  curve.design_pfa = spec.design_pfa;
  curve.m = m;
  curve.n = n;

  for (std::size_t ip = 0; ip < spec.scr_db.size(); ++ip) {
    const double scr = spec.scr_db[ip];
    if (!std::isfinite(scr)) throw std::invalid_argument("run_pd_curve: SCR grid must be finite");
    const double target_power = std::pow(10.0, scr / 10.0) * clutter_power;

    std::int64_t fires;
    try {
      fires = count_fires(spec.trials_per_point, workers, [&](std::int64_t it) {
        Rng rng = Rng::derive(spec.master_seed, kTagPd, ip, static_cast<std::uint64_t>(it));
        static thread_local std::vector<double> ref, test;
        ref.resize(n);
        test.resize(m);
        spec.clutter.sample(rng, ref);
        for (int i = 0; i < m; ++i)
          test[i] = simulate_pixel(spec.clutter.sample_one(rng), target_power, rng);
        return det.decide(det.window_state(test, ref), ctx);
      });
    } catch (const std::exception& e) {
      throw std::runtime_error("pd curve point scr=" + std::to_string(scr) + " dB: " + e.what());
    }

    PdPoint pt;
    pt.scr_db = scr;
    pt.trials = spec.trials_per_point;
    pt.fires = fires;
    pt.p_d = static_cast<double>(fires) / static_cast<double>(pt.trials);
    pt.stderr_ = std::sqrt(pt.p_d * (1.0 - pt.p_d) / static_cast<double>(pt.trials));
    curve.points.push_back(pt);
  }
  return curve;
}

std::vector<RegulationRow> run_pfa_regulation(std::span<const ClutterModel> families,
                                              const Detector& det,
                                              const WindowGeometry& geometry,
                                              double design_pfa, std::int64_t trials,
                                              std::uint64_t master_seed, int workers) {
  geometry.validate();
  if (!(static_cast<double>(trials) * design_pfa >= 100.0))
    throw std::invalid_argument(
        "run_pfa_regulation: trials*design_pfa must be >= 100 for a usable rate estimate");

  const int m = geometry.test_count();
  const int n = geometry.reference_count();
  const DesignContext ctx = det.design(design_pfa);

  std::vector<RegulationRow> rows;
  for (std::size_t fi = 0; fi < families.size(); ++fi) {
    const ClutterModel& model = families[fi];
    const std::int64_t fires = count_fires(trials, workers, [&](std::int64_t it) {
      Rng rng = Rng::derive(master_seed, kTagRegulation, fi, static_cast<std::uint64_t>(it));
      static thread_local std::vector<double> ref, test;
      ref.resize(n);
      test.resize(m);
      model.sample(rng, ref);
      model.sample(rng, test);
      return det.decide(det.window_state(test, ref), ctx);
    });

    RegulationRow row;
    row.family = model.describe();
    row.trials = trials;
    row.fires = fires;
    row.measured_pfa = static_cast<double>(fires) / static_cast<double>(trials);
    const double se =
        std::sqrt(row.measured_pfa * (1.0 - row.measured_pfa) / static_cast<double>(trials));
    row.ci_lo = std::max(0.0, row.measured_pfa - 1.959963984540054 * se);
    row.ci_hi = std::min(1.0, row.measured_pfa + 1.959963984540054 * se);
    row.achieved_pfa = ctx.achieved_pfa;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::pair<Raster, GroundTruth> build_scene(int width, int height, const ClutterModel& clutter,
                                           std::span<const SceneShip> ships,
                                           std::uint64_t seed) {
  GroundTruth truth;
  truth.width = width;
  truth.height = height;
  for (const auto& ship : ships) truth.ships.push_back(ship.ellipse);

  const auto masks = ellipse_masks(truth);  // also validates bounds
  std::vector<std::uint8_t> claimed(static_cast<std::size_t>(width) * height, 0);
  for (const auto& mask : masks)
    for (const auto idx : mask) {
      if (claimed[static_cast<std::size_t>(idx)])
        throw std::invalid_argument("build_scene: overlapping ship ellipses");
      claimed[static_cast<std::size_t>(idx)] = 1;
    }

  Raster raster(width, height);
  Rng crng = Rng::derive(seed, kTagSceneClutter, 0);
  auto px = raster.samples();
  for (auto& v : px)
    v = static_cast<float>(std::max(0.0, clutter.sample_one(crng)));

  const double clutter_power = clutter.second_moment();
  for (std::size_t si = 0; si < masks.size(); ++si) {
    Rng trng = Rng::derive(seed, kTagSceneShip, si);
    const double target_power = std::pow(10.0, ships[si].scr_db / 10.0) * clutter_power;
    for (const auto idx : masks[si]) {
      const auto i = static_cast<std::size_t>(idx);
      px[i] = static_cast<float>(simulate_pixel(px[i], target_power, trng));
    }
  }
  return {std::move(raster), std::move(truth)};
}

}  // namespace wilcfar
