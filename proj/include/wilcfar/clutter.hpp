#pragma once

// Probability models for clutter amplitudes: Gaussian, Weibull, Gamma,
// Rayleigh and K families with PDFs, CDFs/survival functions, quantiles,
// samplers and maximum-likelihood / moment fitters, plus ENL estimation and
// histogram/tail reports for distribution analysis.
//
// Quantiles are closed-form where the family allows and otherwise inverted
// by bracketed bisection on the CDF (lower tail) or survival function
// (upper tail), so thresholds at tail probabilities down to 1e-12 keep full
// relative accuracy.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wilcfar/rng.hpp"

namespace wilcfar {

enum class Family { gaussian, weibull, gamma, rayleigh, k };

const char* family_name(Family f);
std::optional<Family> family_from_name(std::string_view name);

class ClutterModel {
 public:
  static ClutterModel gaussian(double mu, double sigma);
  static ClutterModel weibull(double shape_c, double scale_b);
  static ClutterModel gamma(double shape_k, double scale_theta);
  static ClutterModel rayleigh(double sigma);
  // Amplitude form f(x) = (2b/Gamma(nu)) (bx/2)^nu K_{nu-1}(bx), with
  // moments E[x^r] = (2/b)^r Gamma(nu + r/2) Gamma(1 + r/2) / Gamma(nu).
  static ClutterModel k_distribution(double shape_nu, double scale_b);

  Family family() const { return family_; }
  double param1() const { return p1_; }  // mu / shape
  double param2() const { return p2_; }  // sigma / scale (rayleigh: unused)
  std::string describe() const;

  double pdf(double x) const;
  double cdf(double x) const;
  double sf(double x) const;  // survival function, accurate in the far tail
  // Value x with CDF(x) = p, 0 < p < 1.
  double quantile(double p) const;
  // Value x with SF(x) = tail_p; the threshold form used by the detectors.
  double upper_quantile(double tail_p) const;

  double mean() const;
  double second_moment() const;

  double sample_one(Rng& rng) const;
  void sample(Rng& rng, std::span<double> out) const;

 private:
  ClutterModel(Family f, double p1, double p2) : family_(f), p1_(p1), p2_(p2) {}
  Family family_;
  double p1_, p2_;
};

// ---------------------------------------------------------------------------
// Fitters. All of them throw fit_error on non-convergence and
// std::invalid_argument on unusable inputs.
// ---------------------------------------------------------------------------

struct GaussianFit {
  double mu, sigma;  // sigma is the population (ML) standard deviation
};
GaussianFit gaussian_ml(std::span<const double> samples);

struct WeibullFit {
  double shape_c, scale_b;
};
// Profile-likelihood Newton iteration on the shape, moment-based start,
// bisection fallback; at most max_iter iterations.
WeibullFit weibull_ml(std::span<const double> samples, int max_iter = 100);

double gamma_ml_shape(std::span<const double> samples, int max_iter = 100);
double rayleigh_ml_sigma(std::span<const double> samples);

struct KFit {
  double shape_nu, scale_b;
};
// Method of moments on the 2nd and 4th amplitude moments.
KFit k_method_of_moments(std::span<const double> samples);

// ML scale of a Gamma with known shape when the sample is right-truncated at
// truncation_point; sample_mean is the mean of the retained samples.
double truncated_gamma_scale_ml(double sample_mean, double shape,
                                double truncation_point, int max_iter = 200);

struct FitOptions {
  enum class ShapeMode { ml, fixed } shape_mode = ShapeMode::ml;  // gamma only
  double fixed_shape = 0.0;  // the ENL when shape_mode == fixed
};
ClutterModel fit_model(Family family, std::span<const double> samples,
                       const FitOptions& options = {});

// Equivalent number of looks, (mean/std)^2 of intensity; input samples are
// amplitudes and are squared internally.
double estimate_enl(std::span<const double> amplitude_samples);

// ---------------------------------------------------------------------------
// Histogram / tail report
// ---------------------------------------------------------------------------

struct FamilySpec {
  Family family;
  FitOptions options;
  std::string label;
};

struct HistogramReport {
  std::vector<double> edges;    // bins + 1 equal-width edges over [0, max]
  std::vector<double> centers;  // bins
  std::vector<double> density;  // normalized so the histogram integrates to 1
  std::vector<double> empirical_exceedance;  // P{x > edge}, one per edge
  struct FamilyColumn {
    std::string label;
    Family family;
    bool ok = false;
    std::string error;
    double p1 = 0.0, p2 = 0.0;
    std::vector<double> pdf;         // at bin centers
    std::vector<double> exceedance;  // model SF at edges
  };
  std::vector<FamilyColumn> families;
  std::int64_t sample_count = 0;
};

HistogramReport histogram_report(std::span<const double> samples, int bins,
                                 std::span<const FamilySpec> families);

}  // namespace wilcfar
