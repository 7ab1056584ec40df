#include "wilcfar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wilcfar {

std::int64_t ShipEllipse::analytic_area() const {
  return std::llround(M_PI * a * b / 4.0);
}

std::vector<std::vector<std::int64_t>> ellipse_masks(const GroundTruth& truth) {
  std::vector<std::vector<std::int64_t>> masks;
  masks.reserve(truth.ships.size());
  for (const auto& ship : truth.ships) {
    if (!(ship.a >= ship.b) || !(ship.b > 0.0))
      throw std::invalid_argument("ship ellipse requires a >= b > 0");
    const double th = ship.theta_deg * M_PI / 180.0;
    const double c = std::cos(th), s = std::sin(th);
    const double ra = 0.5 * ship.a, rb = 0.5 * ship.b;
    // extent of the rotated ellipse along the image axes
    const double ex = std::sqrt(ra * ra * c * c + rb * rb * s * s);
    const double ey = std::sqrt(ra * ra * s * s + rb * rb * c * c);
    if (ship.cx - ex < 0.0 || ship.cx + ex > truth.width - 1 || ship.cy - ey < 0.0 ||
        ship.cy + ey > truth.height - 1)
      throw std::out_of_range("ship ellipse leaves the image bounds");

    std::vector<std::int64_t> mask;
    const int x0 = static_cast<int>(std::ceil(ship.cx - ex));
    const int x1 = static_cast<int>(std::floor(ship.cx + ex));
    const int y0 = static_cast<int>(std::ceil(ship.cy - ey));
    const int y1 = static_cast<int>(std::floor(ship.cy + ey));
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        const double dx = x - ship.cx, dy = y - ship.cy;
        const double u = (dx * c + dy * s) / ra;
        const double v = (-dx * s + dy * c) / rb;
        if (u * u + v * v < 1.0)
          mask.push_back(static_cast<std::int64_t>(y) * truth.width + x);
      }
    masks.push_back(std::move(mask));
  }
  return masks;
}

EvalResult evaluate(const DetectionMap& map, const GroundTruth& truth) {
  if (map.width() != truth.width || map.height() != truth.height)
    throw std::invalid_argument("detection map and ground truth dimensions differ");

  const auto masks = ellipse_masks(truth);
  std::vector<std::uint8_t> in_ship(map.raw().size(), 0);
  for (const auto& mask : masks)
    for (const auto idx : mask) in_ship[static_cast<std::size_t>(idx)] = 1;

  EvalResult out;
  std::int64_t analytic_total = 0;
  std::int64_t not_eval_outside = 0;
  const auto raw = map.raw();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (in_ship[i]) continue;
    const auto st = static_cast<PixelState>(raw[i]);
    if (st == PixelState::detected)
      ++out.n_fa;
    else if (st == PixelState::not_evaluated)
      ++not_eval_outside;
  }

  std::int64_t detected_total = 0;
  for (std::size_t si = 0; si < masks.size(); ++si) {
    ShipScore score;
    score.n_s = truth.ships[si].analytic_area();
    for (const auto idx : masks[si])
      if (static_cast<PixelState>(raw[static_cast<std::size_t>(idx)]) == PixelState::detected)
        ++score.n_d;
    score.p_d = score.n_s > 0
                    ? std::min(1.0, static_cast<double>(score.n_d) / static_cast<double>(score.n_s))
                    : 0.0;
    analytic_total += score.n_s;
    detected_total += score.n_d;
    out.ships.push_back(score);
  }

  out.n_c = static_cast<std::int64_t>(map.raw().size()) - analytic_total - not_eval_outside;
  // The analytic ship area can undercount the rasterized mask, so cap the
  // rate at 1 when every background pixel fires.
  out.p_fa = out.n_c > 0
                 ? std::min(1.0, static_cast<double>(out.n_fa) / static_cast<double>(out.n_c))
                 : 0.0;
  out.aggregate_p_d =
      analytic_total > 0
          ? std::min(1.0, static_cast<double>(detected_total) / static_cast<double>(analytic_total))
          : 0.0;
  return out;
}

std::vector<RocRow> roc_sweep(const Raster& raster, const WindowGeometry& geometry,
                              const Detector& detector, const GroundTruth& truth,
                              std::span<const double> design_pfas, const RunOptions& options) {
  if (design_pfas.empty()) throw std::invalid_argument("roc_sweep: empty design list");
  std::vector<double> sorted(design_pfas.begin(), design_pfas.end());
  std::sort(sorted.begin(), sorted.end());

  // one fitting pass over the raster; each design point reuses the states
  const WindowStateGrid grid = compute_window_states(raster, geometry, detector, options);
  std::vector<RocRow> rows;
  rows.reserve(sorted.size());
  for (const double pfa : sorted) {
    const DetectionRun run = decide_with_states(grid, detector, pfa);
    rows.push_back({pfa, evaluate(run.map, truth)});
  }
  return rows;
}

}  // namespace wilcfar
