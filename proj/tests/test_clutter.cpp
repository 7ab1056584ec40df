#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "wilcfar/clutter.hpp"
#include "wilcfar/errors.hpp"
#include "wilcfar/rng.hpp"

using namespace wilcfar;

namespace {

// Adaptive Simpson quadrature, used as an independent oracle for the PDFs.
double simpson(const std::function<double(double)>& f, double a, double b, double fa,
               double fb, double fm, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, fm, flm, eps / 2.0, depth - 1) +
         simpson(f, m, b, fm, fb, frm, eps / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
  const double m = 0.5 * (a + b);
  return simpson(f, a, b, f(a), f(b), f(m), eps, 40);
}

std::vector<ClutterModel> model_zoo() {
  return {ClutterModel::gaussian(2.0, 1.5),   ClutterModel::gaussian(0.0, 1.0),
          ClutterModel::weibull(1.2, 1.0),    ClutterModel::weibull(0.8, 2.0),
          ClutterModel::gamma(3.33, 1.0),     ClutterModel::gamma(0.5, 2.0),
          ClutterModel::rayleigh(1.0),        ClutterModel::rayleigh(2.5),
          ClutterModel::k_distribution(3.0, 2.0), ClutterModel::k_distribution(1.5, 1.0)};
}

// Long-double bisection on erfc, independent of the model code.
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

}  // namespace

TEST_CASE("pdf integrates to one") {
  for (const auto& model : model_zoo()) {
    const double hi = model.quantile(1.0 - 1e-9);
    double integral;
    if (model.family() == Family::gaussian) {
      integral = integrate([&](double x) { return model.pdf(x); }, model.quantile(1e-9),
                           hi, 1e-9);
    } else {
      // substitute x = t^2 so densities with an integrable pole at zero
      // become smooth at the left endpoint
      integral = integrate([&](double t) { return 2.0 * t * model.pdf(t * t); }, 1e-12,
                           std::sqrt(hi), 1e-9);
    }
    CHECK(std::abs(integral - 1.0) < 1e-6);
  }
}

TEST_CASE("pdf is nonnegative across the support") {
  for (const auto& model : model_zoo()) {
    for (double p = 0.02; p < 1.0; p += 0.02) {
      const double x = model.quantile(p);
      CHECK(model.pdf(x) >= 0.0);
    }
    if (model.family() != Family::gaussian) CHECK(model.pdf(-1.0) == 0.0);
  }
}

TEST_CASE("cdf of quantile returns p across the families") {
  const double ps[] = {1e-8, 1e-6, 1e-4, 1e-2, 0.1, 0.25, 0.5, 0.75, 0.9,
                       1.0 - 1e-2, 1.0 - 1e-4, 1.0 - 1e-6, 1.0 - 1e-8};
  for (const auto& model : model_zoo())
    for (const double p : ps) {
      const double q = model.quantile(p);
      CHECK(std::abs(model.cdf(q) - p) < 1e-8);
    }
}

TEST_CASE("upper quantile solves the survival function directly") {
  for (const auto& model : model_zoo())
    for (const double tail : {1e-12, 1e-8, 1e-4, 0.3}) {
      const double q = model.upper_quantile(tail);
      CHECK(std::abs(model.sf(q) / tail - 1.0) < 1e-9);
    }
}

TEST_CASE("closed-form quantiles") {
  CHECK(ClutterModel::weibull(1.0, 1.0).quantile(1.0 - std::exp(-3.0)) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(ClutterModel::gamma(1.0, 1.0).quantile(1.0 - std::exp(-5.0)) ==
        doctest::Approx(5.0).epsilon(1e-9));
  const double z = ClutterModel::gaussian(0.0, 1.0).quantile(1.0 - 1e-7);
  CHECK(z == doctest::Approx(5.1993).epsilon(1e-4));
  CHECK(z == doctest::Approx(normal_upper_quantile_oracle(1e-7)).epsilon(1e-10));
}

TEST_CASE("sampler moments and determinism") {
  SUBCASE("weibull mean matches the Gamma moment") {
    Rng rng(101);
    const auto model = ClutterModel::weibull(2.0, 1.0);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += model.sample_one(rng);
    const double mean = sum / n;
    CHECK(std::abs(mean / 0.88622692545275801365 - 1.0) < 0.005);
  }

  SUBCASE("same seed gives identical streams") {
    for (const auto& model : model_zoo()) {
      Rng a(7), b(7);
      for (int i = 0; i < 100; ++i) CHECK(model.sample_one(a) == model.sample_one(b));
    }
  }
}

TEST_CASE("Kolmogorov-Smirnov agreement between sampler and cdf") {
  std::uint64_t seed = 23;
  for (const auto& model : model_zoo()) {
    Rng rng(seed++);
    const int n = 100000;
    std::vector<double> xs(n);
    model.sample(rng, xs);
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
      const double f = model.cdf(xs[i]);
      d = std::max(d, std::abs(f - static_cast<double>(i) / n));
      d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    CHECK(d < 1.36 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("K compound sampler matches the Gamma-ratio moment formula") {
  const double nu = 3.0, b = 2.0;
  const auto model = ClutterModel::k_distribution(nu, b);
  Rng rng(55);
  const int n = 1000000;
  double m2 = 0.0, m4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = model.sample_one(rng);
    m2 += x * x;
    m4 += x * x * x * x;
  }
  m2 /= n;
  m4 /= n;
  const double want_m2 = model.second_moment();
  const double want_m4 = 32.0 * nu * (nu + 1.0) / (b * b * b * b);
  CHECK(std::abs(m2 / want_m2 - 1.0) < 0.01);
  CHECK(std::abs(m4 / want_m4 - 1.0) < 0.02);
}

TEST_CASE("fit recovers sampling parameters") {
  SUBCASE("rayleigh plug-in formula") {
    const std::vector<double> ones{1, 1, 1, 1};
    CHECK(rayleigh_ml_sigma(ones) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  }

  SUBCASE("weibull ML within 2% at 1e5 samples") {
    Rng rng(17);
    const auto model = ClutterModel::weibull(1.7, 2.3);
    std::vector<double> xs(100000);
    model.sample(rng, xs);
    const auto fit = weibull_ml(xs);
    CHECK(std::abs(fit.shape_c / 1.7 - 1.0) < 0.02);
    CHECK(std::abs(fit.scale_b / 2.3 - 1.0) < 0.02);
  }

  SUBCASE("gamma ML shape within 3% at 1e5 samples") {
    Rng rng(23);
    const auto model = ClutterModel::gamma(3.0, 1.0);
    std::vector<double> xs(100000);
    model.sample(rng, xs);
    CHECK(std::abs(gamma_ml_shape(xs) / 3.0 - 1.0) < 0.03);
  }

  SUBCASE("gamma with fixed shape fits the scale only") {
    Rng rng(29);
    const auto model = ClutterModel::gamma(3.33, 2.0);
    std::vector<double> xs(100000);
    model.sample(rng, xs);
    FitOptions opt;
    opt.shape_mode = FitOptions::ShapeMode::fixed;
    opt.fixed_shape = 3.33;
    const auto fit = fit_model(Family::gamma, xs, opt);
    CHECK(fit.param1() == 3.33);
    CHECK(std::abs(fit.param2() / 2.0 - 1.0) < 0.02);
  }

  SUBCASE("K method of moments within 10% at 1e5 samples") {
    Rng rng(31);
    const auto model = ClutterModel::k_distribution(3.0, 2.0);
    std::vector<double> xs(100000);
    model.sample(rng, xs);
    const auto fit = k_method_of_moments(xs);
    CHECK(std::abs(fit.shape_nu / 3.0 - 1.0) < 0.10);
    CHECK(std::abs(fit.scale_b / 2.0 - 1.0) < 0.05);
  }

  SUBCASE("gaussian ML") {
    Rng rng(37);
    const auto model = ClutterModel::gaussian(4.0, 0.5);
    std::vector<double> xs(100000);
    model.sample(rng, xs);
    const auto fit = gaussian_ml(xs);
    CHECK(std::abs(fit.mu - 4.0) < 0.01);
    CHECK(std::abs(fit.sigma - 0.5) < 0.01);
  }

  SUBCASE("input validation") {
    const std::vector<double> tiny{1.0, 2.0};
    CHECK_THROWS_AS(fit_model(Family::weibull, tiny), std::invalid_argument);
    std::vector<double> with_zero(100, 1.0);
    with_zero[3] = 0.0;
    CHECK_THROWS_AS(fit_model(Family::weibull, with_zero), std::invalid_argument);
    CHECK_THROWS_AS(fit_model(Family::rayleigh, with_zero), std::invalid_argument);
  }
}

TEST_CASE("truncated gamma scale recovery from a censored sample") {
  Rng rng(41);
  const double shape = 2.0, theta = 1.5;
  const auto model = ClutterModel::gamma(shape, theta);
  std::vector<double> xs(200000);
  model.sample(rng, xs);
  const double cut = model.quantile(0.8);
  std::vector<double> kept;
  for (const double x : xs)
    if (x <= cut) kept.push_back(x);
  double mean = 0.0;
  for (const double x : kept) mean += x;
  mean /= static_cast<double>(kept.size());
  const double fitted = truncated_gamma_scale_ml(mean, shape, cut);
  CHECK(std::abs(fitted / theta - 1.0) < 0.02);
}

TEST_CASE("equivalent number of looks") {
  SUBCASE("constant intensity is degenerate") {
    const std::vector<double> c(100, 2.0);
    CHECK_THROWS_AS(estimate_enl(c), degenerate_reference_error);
  }

  SUBCASE("gamma intensity with L looks") {
    Rng rng(43);
    std::vector<double> amp(1000000);
    for (auto& a : amp) a = std::sqrt(rng.gamma(4.0, 2.5));
    CHECK(std::abs(estimate_enl(amp) / 4.0 - 1.0) < 0.02);
  }

  SUBCASE("single-look exponential intensity") {
    Rng rng(47);
    std::vector<double> amp(1000000);
    for (auto& a : amp) a = std::sqrt(rng.exponential(3.0));
    CHECK(std::abs(estimate_enl(amp) - 1.0) < 0.02);
  }
}

TEST_CASE("histogram report") {
  Rng rng(53);
  const auto model = ClutterModel::weibull(1.5, 1.0);
  std::vector<double> xs(200000);
  model.sample(rng, xs);

  SUBCASE("pure synthetic data tracks the fitted exceedance into the tail") {
    const FamilySpec spec{Family::weibull, {}, "weibull"};
    const auto rep = histogram_report(xs, 128, std::span<const FamilySpec>(&spec, 1));
    REQUIRE(rep.families.size() == 1);
    REQUIRE(rep.families[0].ok);
    double width_sum = 0.0;
    for (std::size_t i = 0; i < rep.density.size(); ++i)
      width_sum += rep.density[i] * (rep.edges[i + 1] - rep.edges[i]);
    CHECK(width_sum == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t i = 0; i + 1 < rep.empirical_exceedance.size(); ++i)
      CHECK(rep.empirical_exceedance[i] >= rep.empirical_exceedance[i + 1]);
    const double n = static_cast<double>(rep.sample_count);
    for (std::size_t i = 0; i < rep.edges.size(); ++i) {
      const double m = rep.families[0].exceedance[i];
      if (m < 1e-3) break;
      const double tol = 4.0 * std::sqrt(m * (1.0 - m) / n) + 2.0 / n;
      CHECK(std::abs(rep.empirical_exceedance[i] - m) <= tol);
    }
  }

  SUBCASE("gaussian tail falls below a heavy-tailed sample") {
    Rng rng2(59);
    const auto heavy = ClutterModel::weibull(0.8, 1.0);
    std::vector<double> hs(200000);
    heavy.sample(rng2, hs);
    const FamilySpec spec{Family::gaussian, {}, "gaussian"};
    const auto rep = histogram_report(hs, 128, std::span<const FamilySpec>(&spec, 1));
    REQUIRE(rep.families[0].ok);
    // compare where the empirical tail still has support
    bool gaussian_below = true;
    for (std::size_t i = 0; i < rep.edges.size(); ++i) {
      if (rep.empirical_exceedance[i] > 1e-3 || rep.empirical_exceedance[i] < 1e-4) continue;
      if (rep.families[0].exceedance[i] >= rep.empirical_exceedance[i]) gaussian_below = false;
    }
    CHECK(gaussian_below);
  }

  SUBCASE("empty family list yields the histogram only") {
    const auto rep = histogram_report(xs, 64, {});
    CHECK(rep.families.empty());
    CHECK(rep.density.size() == 64);
  }

  SUBCASE("fit failures are recorded, not fatal") {
    std::vector<double> with_zero = xs;
    with_zero[0] = 0.0;
    const FamilySpec specs[] = {{Family::weibull, {}, "weibull"},
                                {Family::gaussian, {}, "gaussian"}};
    const auto rep = histogram_report(with_zero, 64, specs);
    CHECK(!rep.families[0].ok);
    CHECK(!rep.families[0].error.empty());
    CHECK(rep.families[1].ok);
  }
}

TEST_CASE("second moments back the SCR normalization") {
  Rng rng(61);
  for (const auto& model : model_zoo()) {
    if (model.family() == Family::gaussian) continue;
    double m2 = 0.0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
      const double x = model.sample_one(rng);
      m2 += x * x;
    }
    m2 /= n;
    CHECK(std::abs(m2 / model.second_moment() - 1.0) < 0.02);
  }
}
