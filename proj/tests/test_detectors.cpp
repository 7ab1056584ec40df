#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "wilcfar/clutter.hpp"
#include "wilcfar/detectors.hpp"
#include "wilcfar/errors.hpp"
#include "wilcfar/rng.hpp"

using namespace wilcfar;

namespace {

double normal_upper_quantile_oracle(double tail) {
  long double lo = 0.0L, hi = 40.0L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if (0.5L * erfcl(mid / 1.41421356237309504880L) >= static_cast<long double>(tail))
      lo = mid;
    else
      hi = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

std::vector<double> sample_vector(const ClutterModel& model, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> xs(n);
  model.sample(rng, xs);
  return xs;
}

}  // namespace

TEST_CASE("rank rule decisions at an enumerated threshold") {
  const auto det = make_wilcoxon(2, 2);
  const DesignContext ctx = det->design(0.2);  // t_w = 7 -> t_mw = 4
  CHECK(ctx.rank_threshold == 4);
  CHECK(ctx.achieved_pfa == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

  const std::vector<double> ref{1.0, 2.0};
  CHECK(det->decide(std::vector<double>{10.0, 20.0}, ref, 0.2));    // S = 7
  CHECK(!det->decide(std::vector<double>{10.0, 1.5}, ref, 0.2));    // S = 6

  SUBCASE("extremes") {
    CHECK(det->decide(std::vector<double>{10.0, 20.0}, std::vector<double>{1.0, 2.0}, 0.9));
    CHECK(!det->decide(std::vector<double>{0.1, 0.2}, std::vector<double>{1.0, 2.0}, 0.2));
  }

  SUBCASE("size mismatch") {
    CHECK_THROWS_AS(det->window_state(std::vector<double>{1.0}, ref), std::invalid_argument);
    CHECK_THROWS_AS(det->window_state(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("two-parameter rule") {
  const auto det = make_two_parameter();

  SUBCASE("design 0.5 fires above the mean") {
    CHECK(det->design(0.5).factor == doctest::Approx(0.0).epsilon(1e-10));
    const std::vector<double> ref{8.0, 12.0, 8.0, 12.0};
    CHECK(det->decide(std::vector<double>{10.001}, ref, 0.5));
    CHECK(!det->decide(std::vector<double>{9.999}, ref, 0.5));
  }

  SUBCASE("extreme quantile against a high-precision oracle") {
    CHECK(det->design(1e-7).factor ==
          doctest::Approx(normal_upper_quantile_oracle(1e-7)).epsilon(1e-10));
    CHECK(det->design(1e-7).factor == doctest::Approx(5.1993).epsilon(1e-4));
  }

  SUBCASE("threshold arithmetic at z = 3") {
    const double pfa = ClutterModel::gaussian(0.0, 1.0).sf(3.0);
    std::vector<double> ref;
    for (int i = 0; i < 50; ++i) {
      ref.push_back(8.0);
      ref.push_back(12.0);
    }
    // mu = 10, sigma = 2 -> threshold 16
    CHECK(det->decide(std::vector<double>{16.0001}, ref, pfa));
    CHECK(!det->decide(std::vector<double>{15.9999}, ref, pfa));
  }

  SUBCASE("degenerate reference") {
    const std::vector<double> flat(16, 3.0);
    CHECK_THROWS_AS(det->window_state(std::vector<double>{1.0}, flat),
                    degenerate_reference_error);
  }
}

TEST_CASE("weibull rule") {
  const auto det = make_weibull_cfar();

  SUBCASE("threshold formula from a crafted state") {
    // shape 1, scale 1: exponential tail, threshold -ln(pfa)
    const DesignContext ctx = det->design(std::exp(-3.0));
    CHECK(det->decide(WindowState{3.0001, 1.0, 1.0}, ctx));
    CHECK(!det->decide(WindowState{2.9999, 1.0, 1.0}, ctx));
    // shape 2, scale 1 at 1e-3: sqrt(ln 1000)
    const DesignContext ctx2 = det->design(1e-3);
    const double want = std::sqrt(std::log(1000.0));
    CHECK(det->decide(WindowState{want + 1e-4, 2.0, 1.0}, ctx2));
    CHECK(!det->decide(WindowState{want - 1e-4, 2.0, 1.0}, ctx2));
  }

  SUBCASE("fitted threshold on synthetic clutter") {
    const auto ref = sample_vector(ClutterModel::weibull(1.0, 1.0), 20000, 71);
    const double pfa = std::exp(-3.0);
    const WindowState st = det->window_state(std::vector<double>{1.0}, ref);
    CHECK(std::abs(st.p1 / 1.0 - 1.0) < 0.05);
    CHECK(std::abs(st.p2 / 1.0 - 1.0) < 0.05);
    CHECK(det->decide(std::vector<double>{3.5}, ref, pfa));
    CHECK(!det->decide(std::vector<double>{2.5}, ref, pfa));
  }

  SUBCASE("nonpositive reference is degenerate") {
    std::vector<double> ref(100, 1.0);
    ref[7] = 0.0;
    CHECK_THROWS_AS(det->window_state(std::vector<double>{1.0}, ref),
                    degenerate_reference_error);
  }
}

TEST_CASE("truncated gamma rule") {
  SUBCASE("untruncated exponential reduces to the sample mean") {
    const auto det = make_truncated_gamma(0.0, 1.0);
    std::vector<double> ref;
    for (int i = 0; i < 5; ++i) {
      ref.push_back(1.0);
      ref.push_back(3.0);
    }
    const WindowState st = det->window_state(std::vector<double>{1.0}, ref);
    CHECK(st.p1 == doctest::Approx(2.0).epsilon(1e-12));  // theta = mean / shape
    // design e^-5: threshold theta * 5
    const DesignContext ctx = det->design(std::exp(-5.0));
    CHECK(ctx.factor == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(det->decide(std::vector<double>{10.001}, ref, std::exp(-5.0)));
    CHECK(!det->decide(std::vector<double>{9.999}, ref, std::exp(-5.0)));
  }

  SUBCASE("exponential quantile given the true scale") {
    const auto det = make_truncated_gamma(0.10, 1.0);
    const DesignContext ctx = det->design(1e-3);
    const double threshold = 2.0 * ctx.factor;  // theta = 2
    CHECK(threshold == doctest::Approx(2.0 * std::log(1000.0)).epsilon(1e-9));
    CHECK(det->decide(WindowState{threshold + 1e-6, 2.0, 0.0}, ctx));
    CHECK(!det->decide(WindowState{threshold - 1e-6, 2.0, 0.0}, ctx));
  }

  SUBCASE("contamination study: truncation restores the scale") {
    Rng rng(73);
    const auto clean = ClutterModel::gamma(3.33, 1.0);
    std::vector<double> ref(100000);
    clean.sample(rng, ref);
    for (std::size_t i = 0; i < ref.size(); i += 20) ref[i] *= 50.0;  // 5% outliers

    const auto robust = make_truncated_gamma(0.10, 3.33);
    const auto naive = make_truncated_gamma(0.0, 3.33);
    const double theta_robust =
        robust->window_state(std::vector<double>{1.0}, ref).p1;
    const double theta_naive = naive->window_state(std::vector<double>{1.0}, ref).p1;
    CHECK(std::abs(theta_robust - 1.0) < 0.05);
    CHECK(theta_naive > 1.5);
  }
}

TEST_CASE("trimmed rayleigh rule") {
  const auto det = make_trimmed_rayleigh(2.0);

  SUBCASE("threshold constants") {
    CHECK(det->design(std::exp(-2.0)).factor == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(det->design(1e-4).factor == doctest::Approx(4.29193205).epsilon(1e-8));
  }

  SUBCASE("outliers are trimmed and the scale recovered") {
    Rng rng(81);
    std::vector<double> ref(500);
    ClutterModel::rayleigh(1.0).sample(rng, ref);
    for (int i = 0; i < 10; ++i) ref.push_back(100.0);
    const WindowState st = det->window_state(std::vector<double>{1.0}, ref);
    CHECK(std::abs(st.p1 - 1.0) < 0.05);
    // the hundredfold outliers must be gone for sigma to land near 1
    CHECK(st.p1 < 1.2);
  }

  SUBCASE("all-zero reference is degenerate") {
    const std::vector<double> zeros(64, 0.0);
    CHECK_THROWS_AS(det->window_state(std::vector<double>{1.0}, zeros),
                    degenerate_reference_error);
  }
}

TEST_CASE("scale equivariance of the parametric rules") {
  Rng rng(83);
  const auto clutter = ClutterModel::gamma(2.5, 1.3);
  std::vector<std::unique_ptr<Detector>> dets;
  dets.push_back(make_two_parameter());
  dets.push_back(make_weibull_cfar());
  dets.push_back(make_truncated_gamma(0.10, 3.0));
  dets.push_back(make_trimmed_rayleigh(2.0));

  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> ref(64);
    clutter.sample(rng, ref);
    const double x = clutter.sample_one(rng) * rng.uniform(0.5, 4.0);
    const double alpha = std::exp(rng.uniform(-2.0, 2.0));
    std::vector<double> ref_scaled = ref;
    for (auto& v : ref_scaled) v *= alpha;
    for (const auto& det : dets)
      for (const double pfa : {1e-2, 1e-4})
        CHECK(det->decide(std::vector<double>{x}, ref, pfa) ==
              det->decide(std::vector<double>{x * alpha}, ref_scaled, pfa));
  }
}

TEST_CASE("rank rule is invariant under any increasing transform") {
  Rng rng(89);
  const auto det = make_wilcoxon(2, 24);
  const auto transforms = std::vector<std::function<double(double)>>{
      [](double v) { return 3.0 * v + 1.0; },
      [](double v) { return v * v * v; },
      [](double v) { return std::log(v + 0.5); },
      [](double v) { return std::exp(v); },
      [](double v) { return v / (1.0 + v); }};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> test(2), ref(24);
    for (auto& v : test) v = rng.uniform01();
    for (auto& v : ref) v = rng.uniform01();
    const std::int64_t base = mann_whitney_statistic(test, ref);
    for (const auto& f : transforms) {
      std::vector<double> t2(2), r2(24);
      for (int i = 0; i < 2; ++i) t2[i] = f(test[i]);
      for (int i = 0; i < 24; ++i) r2[i] = f(ref[i]);
      CHECK(mann_whitney_statistic(t2, r2) == base);
    }
  }
}

TEST_CASE("distribution-free firing rate, quick Monte Carlo") {
  const auto det = make_wilcoxon(2, 32);
  const DesignContext ctx = det->design(1e-2);
  const ClutterModel families[] = {ClutterModel::weibull(1.2, 1.0),
                                   ClutterModel::k_distribution(3.0, 2.0)};
  for (std::size_t fi = 0; fi < 2; ++fi) {
    std::int64_t fires = 0;
    const int trials = 40000;
    for (int it = 0; it < trials; ++it) {
      Rng rng = Rng::derive(97, fi, static_cast<std::uint64_t>(it));
      std::vector<double> test(2), ref(32);
      families[fi].sample(rng, ref);
      families[fi].sample(rng, test);
      if (det->decide(det->window_state(test, ref), ctx)) ++fires;
    }
    const double rate = static_cast<double>(fires) / trials;
    const double sigma = std::sqrt(ctx.achieved_pfa * (1 - ctx.achieved_pfa) / trials);
    CHECK(std::abs(rate - ctx.achieved_pfa) <= 3.0 * sigma);
  }
}

TEST_CASE("gaussian assumption over-fires on heavy-tailed clutter, quick Monte Carlo") {
  const auto det = make_two_parameter();
  const DesignContext ctx = det->design(1e-3);
  const auto clutter = ClutterModel::weibull(1.2, 1.0);
  std::int64_t fires = 0;
  const int trials = 100000;
  for (int it = 0; it < trials; ++it) {
    Rng rng = Rng::derive(101, 0, static_cast<std::uint64_t>(it));
    std::vector<double> test(1), ref(248);
    clutter.sample(rng, ref);
    clutter.sample(rng, test);
    if (det->decide(det->window_state(test, ref), ctx)) ++fires;
  }
  const double rate = static_cast<double>(fires) / trials;
  CHECK(rate > 2e-3);
}

TEST_CASE("detector construction and config") {
  DetectorConfig cfg;
  cfg.kind = DetectorKind::truncated_gamma;
  cfg.shape = 3.33;
  const WindowGeometry geom{1, 30, 1, 1};
  const auto det = make_detector(cfg, geom);
  CHECK(std::string(det->name()) == "truncated_gamma");

  cfg.shape.reset();
  CHECK_THROWS_AS(make_detector(cfg, geom, nullptr), std::invalid_argument);

  cfg.kind = DetectorKind::wilcoxon;
  const WindowGeometry paper{2, 30, 3, 2};
  const auto w = make_detector(cfg, paper);
  CHECK(std::string(w->name()) == "wilcoxon");

  DetectorConfig bad;
  bad.truncation_ratio = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("state grids reproduce the one-shot detection maps") {
  Rng rng(4711);
  std::vector<float> px(120 * 120);
  for (auto& v : px) v = static_cast<float>(rng.uniform(0.1, 1.1));
  const Raster raster = Raster::from_samples(120, 120, std::move(px));

  struct Case {
    std::unique_ptr<Detector> det;
    WindowGeometry geom;
  };
  std::vector<Case> cases;
  cases.push_back({make_wilcoxon(4, WindowGeometry{2, 3, 2, 2}.reference_count()),
                   WindowGeometry{2, 3, 2, 2}});
  cases.push_back({make_two_parameter(), WindowGeometry{1, 3, 1, 1}});
  cases.push_back({make_trimmed_rayleigh(2.0), WindowGeometry{1, 0, 4, 1}});

  for (const auto& c : cases) {
    const auto grid = compute_window_states(raster, c.geom, *c.det);
    for (const double pfa : {0.05, 1e-3}) {
      const auto direct = run_detector(raster, c.geom, *c.det, pfa);
      const auto via_grid = decide_with_states(grid, *c.det, pfa);
      CHECK(direct.map == via_grid.map);
      CHECK(direct.fired == via_grid.fired);
      CHECK(direct.windows == via_grid.windows);
    }
  }

  SUBCASE("degenerate windows match under the skip policy") {
    Raster flat(60, 60, 1.0f);
    // a lone bump keeps the raster non-loadable as all-ties everywhere
    flat.set(30, 30, 2.0f);
    const WindowGeometry geom{1, 2, 1, 1};
    const auto det = make_two_parameter();
    RunOptions opts;
    opts.skip_degenerate = true;
    const auto grid = compute_window_states(flat, geom, *det, opts);
    const auto direct = run_detector(flat, geom, *det, 1e-3, opts);
    const auto via_grid = decide_with_states(grid, *det, 1e-3);
    CHECK(direct.map == via_grid.map);
    CHECK(direct.degenerate == via_grid.degenerate);
    CHECK(grid.degenerate > 0);
  }
}

TEST_CASE("design pfa bounds") {
  const auto det = make_two_parameter();
  CHECK_THROWS_AS(det->design(0.0), std::invalid_argument);
  CHECK_THROWS_AS(det->design(1.0), std::invalid_argument);
}
