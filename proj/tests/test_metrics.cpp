#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "wilcfar/metrics.hpp"
#include "wilcfar/rng.hpp"
#include "wilcfar/sim.hpp"

using namespace wilcfar;

TEST_CASE("analytic ellipse areas") {
  CHECK(ShipEllipse{0, 0, 20, 10, 0}.analytic_area() == 157);  // round(50 pi)
  CHECK(ShipEllipse{0, 0, 2, 2, 0}.analytic_area() == 3);      // round(pi)
}

TEST_CASE("ellipse masks") {
  SUBCASE("unit circle at a pixel center covers only that center") {
    GroundTruth truth{64, 64, {ShipEllipse{32, 32, 2, 2, 0}}};
    const auto masks = ellipse_masks(truth);
    REQUIRE(masks.size() == 1);
    CHECK(masks[0].size() <= 4);
    CHECK(std::find(masks[0].begin(), masks[0].end(), 32 * 64 + 32) != masks[0].end());
  }

  SUBCASE("rotation preserves the pixel count approximately") {
    GroundTruth truth{256, 256,
                      {ShipEllipse{100, 100, 40, 16, 0}, ShipEllipse{180, 180, 40, 16, 37.0}}};
    const auto masks = ellipse_masks(truth);
    const double area = M_PI * 40 * 16 / 4.0;
    CHECK(std::abs(static_cast<double>(masks[0].size()) - area) < 0.05 * area);
    CHECK(std::abs(static_cast<double>(masks[1].size()) - area) < 0.05 * area);
  }

  SUBCASE("degenerate axes") {
    GroundTruth truth{64, 64, {ShipEllipse{32, 32, 0, 0, 0}}};
    CHECK_THROWS_AS(ellipse_masks(truth), std::invalid_argument);
    truth.ships[0] = ShipEllipse{32, 32, 4, 8, 0};  // a < b
    CHECK_THROWS_AS(ellipse_masks(truth), std::invalid_argument);
  }

  SUBCASE("out of bounds") {
    GroundTruth truth{64, 64, {ShipEllipse{2, 32, 20, 10, 0}}};
    CHECK_THROWS_AS(ellipse_masks(truth), std::out_of_range);
  }
}

TEST_CASE("evaluation arithmetic") {
  SUBCASE("published background count and rate") {
    // 1001x901 image, total analytic ship area 1583, 26 false alarms
    GroundTruth truth{1001, 901, {}};
    // a*b = 4*1583/pi; round(pi*a*b/4) == 1583
    const double ab = 4.0 * 1583.0 / M_PI;
    const ShipEllipse ship{500.0, 450.0, ab / 40.0, 40.0, 0.0};
    REQUIRE(ship.analytic_area() == 1583);
    truth.ships.push_back(ship);

    DetectionMap map(1001, 901);
    for (int y = 0; y < 901; ++y)
      for (int x = 0; x < 1001; ++x) map.set(x, y, PixelState::clear);
    for (int i = 0; i < 26; ++i) map.set(10 + i, 5, PixelState::detected);

    const EvalResult r = evaluate(map, truth);
    CHECK(r.n_fa == 26);
    CHECK(r.n_c == 900318);
    CHECK(r.p_fa == 26.0 / 900318.0);
  }

  SUBCASE("no detections") {
    GroundTruth truth{64, 64, {ShipEllipse{32, 32, 8, 4, 0}}};
    DetectionMap map(64, 64);
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x) map.set(x, y, PixelState::clear);
    const EvalResult r = evaluate(map, truth);
    CHECK(r.n_fa == 0);
    CHECK(r.p_fa == 0.0);
    CHECK(r.ships[0].p_d == 0.0);
  }

  SUBCASE("everything detected") {
    // pick a circle whose rasterized mask has exactly the analytic pixel
    // count, so the saturated rates are exact
    GroundTruth truth{128, 128, {}};
    bool found = false;
    for (double d = 10.0; d < 40.0 && !found; d += 0.25) {
      for (double off : {0.0, 0.5}) {
        const ShipEllipse ship{64.0 + off, 64.0 + off, d, d, 0.0};
        GroundTruth probe{128, 128, {ship}};
        if (static_cast<std::int64_t>(ellipse_masks(probe)[0].size()) ==
            ship.analytic_area()) {
          truth.ships.push_back(ship);
          found = true;
          break;
        }
      }
    }
    REQUIRE(found);
    DetectionMap map(128, 128);
    for (int y = 0; y < 128; ++y)
      for (int x = 0; x < 128; ++x) map.set(x, y, PixelState::detected);
    const EvalResult r = evaluate(map, truth);
    CHECK(r.p_fa == 1.0);
    CHECK(r.ships[0].p_d == 1.0);
    CHECK(r.aggregate_p_d == 1.0);
  }

  SUBCASE("saturated map keeps the rate within bounds when areas disagree") {
    GroundTruth truth{64, 64, {ShipEllipse{32, 32, 8, 4, 0}}};
    DetectionMap map(64, 64);
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x) map.set(x, y, PixelState::detected);
    const EvalResult r = evaluate(map, truth);
    CHECK(r.p_fa <= 1.0);
    CHECK(r.p_fa > 0.99);
    CHECK(r.ships[0].p_d <= 1.0);
  }

  SUBCASE("unevaluated pixels leave both counts") {
    GroundTruth truth{10, 10, {}};
    DetectionMap map(10, 10);  // everything not_evaluated
    for (int x = 0; x < 10; ++x) map.set(x, 0, PixelState::clear);
    map.set(3, 0, PixelState::detected);
    const EvalResult r = evaluate(map, truth);
    CHECK(r.n_c == 10);
    CHECK(r.n_fa == 1);
    CHECK(r.p_fa == 0.1);
  }

  SUBCASE("false alarms plus in-mask detections account for every detection") {
    GroundTruth truth{128, 128, {ShipEllipse{64, 64, 16, 8, 20.0}}};
    Rng rng(5);
    DetectionMap map(128, 128);
    std::int64_t detected = 0;
    for (int y = 0; y < 128; ++y)
      for (int x = 0; x < 128; ++x) {
        const bool d = rng.uniform01() < 0.05;
        map.set(x, y, d ? PixelState::detected : PixelState::clear);
        detected += d;
      }
    const EvalResult r = evaluate(map, truth);
    std::int64_t inside = 0;
    for (const auto& mask : ellipse_masks(truth))
      for (const auto idx : mask)
        if (static_cast<PixelState>(map.raw()[static_cast<std::size_t>(idx)]) ==
            PixelState::detected)
          ++inside;
    CHECK(r.n_fa + inside == detected);
  }

  SUBCASE("dimension mismatch") {
    GroundTruth truth{64, 63, {}};
    DetectionMap map(64, 64);
    CHECK_THROWS_AS(evaluate(map, truth), std::invalid_argument);
  }
}

TEST_CASE("roc sweep") {
  const auto [raster, truth] = build_scene(
      160, 160, ClutterModel::weibull(1.5, 1.0),
      std::vector<SceneShip>{{ShipEllipse{80, 80, 14, 7, 30.0}, 18.0}}, 2024);
  const WindowGeometry geom{2, 4, 3, 2};
  const auto det = make_wilcoxon(geom.test_count(), geom.reference_count());

  SUBCASE("a single design point equals one evaluate call") {
    const double pfa = 1e-3;
    const auto rows = roc_sweep(raster, geom, *det, truth, std::vector<double>{pfa});
    REQUIRE(rows.size() == 1);
    const auto run = run_detector(raster, geom, *det, pfa);
    const EvalResult direct = evaluate(run.map, truth);
    CHECK(rows[0].eval.n_fa == direct.n_fa);
    CHECK(rows[0].eval.n_c == direct.n_c);
    CHECK(rows[0].eval.ships[0].n_d == direct.ships[0].n_d);
  }

  SUBCASE("detection probability is nondecreasing in the design rate") {
    const std::vector<double> pfas{1e-6, 1e-4, 1e-2, 1e-1};
    const auto rows = roc_sweep(raster, geom, *det, truth, pfas);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      CHECK(rows[i].design_pfa < rows[i + 1].design_pfa);
      CHECK(rows[i].eval.aggregate_p_d <= rows[i + 1].eval.aggregate_p_d + 1e-12);
    }
  }

  SUBCASE("empty design list") {
    CHECK_THROWS_AS(roc_sweep(raster, geom, *det, truth, {}), std::invalid_argument);
  }
}
