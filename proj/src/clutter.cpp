#include "wilcfar/clutter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "wilcfar/errors.hpp"
#include "wilcfar/kernels.hpp"

namespace wilcfar {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

double lgamma_(double x) { return std::lgamma(x); }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::weibull: return "weibull";
    case Family::gamma: return "gamma";
    case Family::rayleigh: return "rayleigh";
    case Family::k: return "k";
  }
  return "?";
}

std::optional<Family> family_from_name(std::string_view name) {
  if (name == "gaussian") return Family::gaussian;
  if (name == "weibull") return Family::weibull;
  if (name == "gamma") return Family::gamma;
  if (name == "rayleigh") return Family::rayleigh;
  if (name == "k") return Family::k;
  return std::nullopt;
}

ClutterModel ClutterModel::gaussian(double mu, double sigma) {
  require_positive(sigma, "gaussian sigma");
  if (!std::isfinite(mu)) throw std::invalid_argument("gaussian mu must be finite");
  return ClutterModel(Family::gaussian, mu, sigma);
}

ClutterModel ClutterModel::weibull(double shape_c, double scale_b) {
  require_positive(shape_c, "weibull shape");
  require_positive(scale_b, "weibull scale");
  return ClutterModel(Family::weibull, shape_c, scale_b);
}

ClutterModel ClutterModel::gamma(double shape_k, double scale_theta) {
  require_positive(shape_k, "gamma shape");
  require_positive(scale_theta, "gamma scale");
  return ClutterModel(Family::gamma, shape_k, scale_theta);
}

ClutterModel ClutterModel::rayleigh(double sigma) {
  require_positive(sigma, "rayleigh sigma");
  return ClutterModel(Family::rayleigh, sigma, 0.0);
}

ClutterModel ClutterModel::k_distribution(double shape_nu, double scale_b) {
  require_positive(shape_nu, "k shape");
  require_positive(scale_b, "k scale");
  return ClutterModel(Family::k, shape_nu, scale_b);
}

std::string ClutterModel::describe() const {
  switch (family_) {
    case Family::gaussian:
      return "gaussian(mu=" + std::to_string(p1_) + ", sigma=" + std::to_string(p2_) + ")";
    case Family::weibull:
      return "weibull(c=" + std::to_string(p1_) + ", b=" + std::to_string(p2_) + ")";
    case Family::gamma:
      return "gamma(k=" + std::to_string(p1_) + ", theta=" + std::to_string(p2_) + ")";
    case Family::rayleigh:
      return "rayleigh(sigma=" + std::to_string(p1_) + ")";
    case Family::k:
      return "k(nu=" + std::to_string(p1_) + ", b=" + std::to_string(p2_) + ")";
  }
  return "?";
}

double ClutterModel::pdf(double x) const {
  switch (family_) {
    case Family::gaussian: {
      const double z = (x - p1_) / p2_;
      return std::exp(-0.5 * z * z) / (p2_ * std::sqrt(2.0 * M_PI));
    }
    case Family::weibull: {
      if (x < 0.0) return 0.0;
      if (x == 0.0) return p1_ > 1.0 ? 0.0 : (p1_ == 1.0 ? 1.0 / p2_ : INFINITY);
      const double z = x / p2_;
      return (p1_ / p2_) * std::exp((p1_ - 1.0) * std::log(z) - std::pow(z, p1_));
    }
    case Family::gamma: {
      if (x < 0.0) return 0.0;
      if (x == 0.0) return p1_ > 1.0 ? 0.0 : (p1_ == 1.0 ? 1.0 / p2_ : INFINITY);
      const double z = x / p2_;
      return std::exp((p1_ - 1.0) * std::log(z) - z - lgamma_(p1_)) / p2_;
    }
    case Family::rayleigh: {
      if (x < 0.0) return 0.0;
      const double s2 = p1_ * p1_;
      return (x / s2) * std::exp(-0.5 * x * x / s2);
    }
    case Family::k: {
      if (x < 0.0) return 0.0;
      if (x == 0.0) return p1_ > 0.5 ? 0.0 : INFINITY;
      const double nu = p1_, b = p2_;
      const double z = b * x;
      // small-argument limit keeps the Bessel evaluation in range
      if (z < 1e-6 && nu > 1.0) return b * z / (2.0 * (nu - 1.0));
      const double lk = std::log(boost::math::cyl_bessel_k(std::abs(nu - 1.0), z));
      return std::exp(std::log(2.0 * b) + nu * std::log(0.5 * z) - lgamma_(nu) + lk);
    }
  }
  return 0.0;
}

double ClutterModel::sf(double x) const {
  switch (family_) {
    case Family::gaussian:
      return 0.5 * std::erfc((x - p1_) / (p2_ * kSqrt2));
    case Family::weibull:
      if (x <= 0.0) return 1.0;
      return std::exp(-std::pow(x / p2_, p1_));
    case Family::gamma:
      if (x <= 0.0) return 1.0;
      return boost::math::gamma_q(p1_, x / p2_);
    case Family::rayleigh:
      if (x <= 0.0) return 1.0;
      return std::exp(-0.5 * x * x / (p1_ * p1_));
    case Family::k: {
      if (x <= 0.0) return 1.0;
      const double nu = p1_, b = p2_;
      const double z = b * x;
      if (z < 1e-6) return 1.0;  // 1 - O(z^min(2, 2 nu))
      const double lk = std::log(boost::math::cyl_bessel_k(nu, z));
      const double v = std::exp(std::log(2.0) + nu * std::log(0.5 * z) - lgamma_(nu) + lk);
      return std::min(v, 1.0);
    }
  }
  return 0.0;
}

double ClutterModel::cdf(double x) const {
  switch (family_) {
    case Family::gaussian:
      return 0.5 * std::erfc((p1_ - x) / (p2_ * kSqrt2));
    case Family::weibull:
      if (x <= 0.0) return 0.0;
      return -std::expm1(-std::pow(x / p2_, p1_));
    case Family::gamma:
      if (x <= 0.0) return 0.0;
      return boost::math::gamma_p(p1_, x / p2_);
    case Family::rayleigh:
      if (x <= 0.0) return 0.0;
      return -std::expm1(-0.5 * x * x / (p1_ * p1_));
    case Family::k:
      if (x <= 0.0) return 0.0;
      return 1.0 - sf(x);
  }
  return 0.0;
}

namespace {

// Bisection on a monotone tail function. For positive-support families the
// search runs in log-x to keep relative accuracy near zero. Converges to a
// relative probability error ~1e-13 long before the iteration cap.
template <class F>
double invert_decreasing(F&& f, double target, double lo, double hi, bool log_space) {
  // invariant: f(lo) >= target >= f(hi)
  for (int i = 0; i < 200; ++i) {
    const double mid = log_space ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (f(mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double ClutterModel::upper_quantile(double tail_p) const {
  if (!(tail_p > 0.0) || !(tail_p < 1.0))
    throw std::invalid_argument("upper_quantile: tail probability must be in (0, 1)");
  switch (family_) {
    case Family::weibull:
      return p2_ * std::pow(-std::log(tail_p), 1.0 / p1_);
    case Family::rayleigh:
      return p1_ * std::sqrt(-2.0 * std::log(tail_p));
    case Family::gaussian: {
      // expand a symmetric bracket around the mean
      double lo = p1_, hi = p1_ + p2_;
      while (sf(hi) > tail_p) hi = p1_ + 2.0 * (hi - p1_);
      while (sf(lo) < tail_p) lo = p1_ - 2.0 * (p1_ - lo + p2_);
      return invert_decreasing([this](double x) { return sf(x); }, tail_p, lo, hi, false);
    }
    case Family::gamma:
    case Family::k: {
      double hi = (family_ == Family::gamma) ? p2_ * std::max(1.0, p1_) : 2.0 / p2_;
      while (sf(hi) > tail_p) {
        hi *= 2.0;
        if (!std::isfinite(hi)) throw fit_error("upper_quantile: bracket expansion failed");
      }
      const double lo = std::min(hi * 0x1p-80, 1e-290);
      return invert_decreasing([this](double x) { return sf(x); }, tail_p, lo, hi, true);
    }
  }
  throw std::logic_error("unreachable");
}

double ClutterModel::quantile(double p) const {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("quantile: p must be in (0, 1)");
  if (p > 0.5) return upper_quantile(1.0 - p);  // 1-p is exact for p >= 0.5
  // cdf is increasing, so hand the solver its negation
  switch (family_) {
    case Family::weibull:
      return p2_ * std::pow(-std::log1p(-p), 1.0 / p1_);
    case Family::rayleigh:
      return p1_ * std::sqrt(-2.0 * std::log1p(-p));
    case Family::gaussian: {
      const double hi = p1_;  // cdf(hi) >= 0.5 >= p
      double lo = p1_ - p2_;
      while (cdf(lo) > p) lo = p1_ - 2.0 * (p1_ - lo);
      return invert_decreasing([this](double x) { return -cdf(x); }, -p, lo, hi, false);
    }
    case Family::gamma:
    case Family::k: {
      double hi = (family_ == Family::gamma) ? p2_ * std::max(1.0, p1_) : 2.0 / p2_;
      while (cdf(hi) < p) hi *= 2.0;
      const double lo = std::min(hi * 0x1p-80, 1e-290);
      return invert_decreasing([this](double x) { return -cdf(x); }, -p, lo, hi, true);
    }
  }
  throw std::logic_error("unreachable");
}

double ClutterModel::mean() const {
  switch (family_) {
    case Family::gaussian: return p1_;
    case Family::weibull: return p2_ * std::tgamma(1.0 + 1.0 / p1_);
    case Family::gamma: return p1_ * p2_;
    case Family::rayleigh: return p1_ * std::sqrt(0.5 * M_PI);
    case Family::k:
      return (2.0 / p2_) *
             std::exp(lgamma_(p1_ + 0.5) + lgamma_(1.5) - lgamma_(p1_));
  }
  return 0.0;
}

double ClutterModel::second_moment() const {
  switch (family_) {
    case Family::gaussian: return p1_ * p1_ + p2_ * p2_;
    case Family::weibull: return p2_ * p2_ * std::tgamma(1.0 + 2.0 / p1_);
    case Family::gamma: return p2_ * p2_ * p1_ * (p1_ + 1.0);
    case Family::rayleigh: return 2.0 * p1_ * p1_;
    case Family::k: return 4.0 * p1_ / (p2_ * p2_);
  }
  return 0.0;
}

double ClutterModel::sample_one(Rng& rng) const {
  switch (family_) {
    case Family::gaussian: return p1_ + p2_ * rng.normal();
    case Family::weibull: return p2_ * std::pow(-std::log(rng.uniform_pos()), 1.0 / p1_);
    case Family::gamma: return rng.gamma(p1_, p2_);
    case Family::rayleigh: return rng.rayleigh(p1_);
    case Family::k: {
      // compound representation: x = r * sqrt(tau) with a mean-one Gamma
      // texture tau ~ Gamma(nu, 1/nu) and r ~ Rayleigh(sqrt(2 nu)/b)
      const double tau = rng.gamma(p1_, 1.0 / p1_);
      const double r = rng.rayleigh(std::sqrt(2.0 * p1_) / p2_);
      return r * std::sqrt(tau);
    }
  }
  return 0.0;
}

void ClutterModel::sample(Rng& rng, std::span<double> out) const {
  for (auto& v : out) v = sample_one(rng);
}

// ---------------------------------------------------------------------------
// Fitters
// ---------------------------------------------------------------------------

GaussianFit gaussian_ml(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("gaussian_ml: need at least 2 samples");
  const auto& ops = kernels::active();
  const double n = static_cast<double>(samples.size());
  const double mu = ops.sum(samples.data(), samples.size()) / n;
  const double ex2 = ops.sum_sq(samples.data(), samples.size()) / n;
  const double var = std::max(0.0, ex2 - mu * mu);
  return {mu, std::sqrt(var)};
}

WeibullFit weibull_ml(std::span<const double> samples, int max_iter) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("weibull_ml: need at least 2 samples");

  double mean = 0.0, lx_max = -INFINITY;
  for (const double x : samples) {
    if (!(x > 0.0)) throw std::invalid_argument("weibull_ml: nonpositive sample");
    mean += x;
  }
  mean /= static_cast<double>(n);

  std::vector<double> lx(n);
  double lx_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(samples[i]);
    lx_mean += lx[i];
    lx_max = std::max(lx_max, lx[i]);
  }
  lx_mean /= static_cast<double>(n);

  double var = 0.0;
  for (const double x : samples) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n);
  if (var == 0.0) throw fit_error("weibull_ml: degenerate (constant) sample");

  // profile equation g(c) = sum(x^c ln x)/sum(x^c) - 1/c - mean(ln x) = 0,
  // evaluated with weights exp(c (lx - lx_max)) to avoid overflow
  const auto profile = [&](double c, double* dg) {
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = std::exp(c * (lx[i] - lx_max));
      b0 += w;
      b1 += w * lx[i];
      b2 += w * lx[i] * lx[i];
    }
    const double r = b1 / b0;
    if (dg) *dg = (b2 / b0 - r * r) + 1.0 / (c * c);
    return r - 1.0 / c - lx_mean;
  };

  const double cv = std::sqrt(var) / mean;
  double c = std::pow(cv, -1.086);  // moment-based start
  c = std::clamp(c, 0.02, 200.0);

  // bracket the root; g is increasing in c
  double clo = c, chi = c;
  int guard = 0;
  while (profile(clo, nullptr) > 0.0) {
    clo *= 0.5;
    if (++guard > 80) throw fit_error("weibull_ml: failed to bracket shape");
  }
  guard = 0;
  while (profile(chi, nullptr) < 0.0) {
    chi *= 2.0;
    if (++guard > 80) throw fit_error("weibull_ml: failed to bracket shape");
  }

  c = std::clamp(c, clo, chi);
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    double dg;
    const double g = profile(c, &dg);
    if (g > 0.0)
      chi = c;
    else
      clo = c;
    double step = g / dg;
    double next = c - step;
    if (!(next > clo && next < chi)) next = 0.5 * (clo + chi);  // bisection fallback
    if (std::abs(next - c) <= 1e-12 * c) {
      c = next;
      converged = true;
      break;
    }
    c = next;
  }
  if (!converged && chi - clo > 1e-9 * c)
    throw fit_error("weibull_ml: shape iteration did not converge");

  // scale from the shape: b = (mean(x^c))^(1/c)
  double b0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) b0 += std::exp(c * (lx[i] - lx_max));
  const double log_b = lx_max + std::log(b0 / static_cast<double>(n)) / c;
  return {c, std::exp(log_b)};
}

double gamma_ml_shape(std::span<const double> samples, int max_iter) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("gamma_ml_shape: need at least 2 samples");
  double mean = 0.0, lmean = 0.0;
  for (const double x : samples) {
    if (!(x > 0.0)) throw std::invalid_argument("gamma_ml_shape: nonpositive sample");
    mean += x;
    lmean += std::log(x);
  }
  mean /= static_cast<double>(n);
  lmean /= static_cast<double>(n);
  const double s = std::log(mean) - lmean;
  if (!(s > 0.0)) throw fit_error("gamma_ml_shape: degenerate sample");

  double k = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
  for (int it = 0; it < max_iter; ++it) {
    const double f = std::log(k) - boost::math::digamma(k) - s;
    const double df = 1.0 / k - boost::math::trigamma(k);
    double next = k - f / df;
    if (!(next > 0.0) || !std::isfinite(next)) next = 0.5 * k;
    if (std::abs(next - k) <= 1e-12 * k) return next;
    k = next;
  }
  throw fit_error("gamma_ml_shape: did not converge");
}

double rayleigh_ml_sigma(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("rayleigh_ml_sigma: empty sample");
  const double ss = kernels::active().sum_sq(samples.data(), samples.size());
  return std::sqrt(ss / (2.0 * static_cast<double>(samples.size())));
}

KFit k_method_of_moments(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("k_method_of_moments: need at least 2 samples");
  double m2 = 0.0, m4 = 0.0;
  for (const double x : samples) {
    if (!(x > 0.0)) throw std::invalid_argument("k_method_of_moments: nonpositive sample");
    const double x2 = x * x;
    m2 += x2;
    m4 += x2 * x2;
  }
  m2 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  const double r = m4 / (m2 * m2);  // equals 2 + 2/nu for this family
  if (!(r > 2.0))
    throw fit_error("k_method_of_moments: moment ratio at or below the Rayleigh limit");
  const double nu = 2.0 / (r - 2.0);
  const double b = 2.0 * std::sqrt(nu / m2);
  return {nu, b};
}

double truncated_gamma_scale_ml(double sample_mean, double shape,
                                double truncation_point, int max_iter) {
  require_positive(shape, "truncated gamma shape");
  require_positive(truncation_point, "truncation point");
  if (!(sample_mean > 0.0))
    throw std::invalid_argument("truncated gamma fit: sample mean must be positive");

  // d/dtheta log-likelihood = 0 reduces to
  //   h(theta) = mean - shape*theta + T * g(T/theta) / P(shape, T/theta) = 0
  // with g the Gamma(shape, 1) density. h is positive at the untruncated ML
  // scale and negative for large theta whenever the ML solution exists.
  const auto h = [&](double theta) {
    const double z = truncation_point / theta;
    const double lg = (shape - 1.0) * std::log(z) - z - lgamma_(shape);
    const double p = boost::math::gamma_p(shape, z);
    return sample_mean - shape * theta + truncation_point * std::exp(lg) / p;
  };

  // As theta grows the truncated model's mean rises to shape*T/(shape+1);
  // a retained mean at or above that admits no finite ML scale.
  if (sample_mean >= shape * truncation_point / (shape + 1.0) * (1.0 - 1e-12))
    throw degenerate_reference_error(
        "truncated gamma fit: retained mean exceeds the truncated-model mean limit");

  double lo = sample_mean / shape;
  double flo = h(lo);
  int lo_guard = 0;
  while (flo < 0.0) {  // numerical safety; analytically h(lo) > 0
    lo *= 0.5;
    flo = h(lo);
    if (++lo_guard > 60) throw fit_error("truncated gamma fit: no valid bracket");
  }
  double hi = lo, fhi = flo;
  int guard = 0;
  while (fhi > 0.0) {
    hi *= 2.0;
    fhi = h(hi);
    if (++guard > 200)
      throw fit_error("truncated gamma fit: no finite scale solves the likelihood");
  }
  if (hi > lo * 2.0) lo = hi * 0.5;  // tighten after expansion
  flo = h(lo);

  // Illinois false position: superlinear on this smooth monotone function
  int last_side = 0;
  for (int it = 0; it < max_iter; ++it) {
    double mid = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    const double fm = h(mid);
    if (fm > 0.0) {
      lo = mid;
      flo = fm;
      if (last_side == 1) fhi *= 0.5;
      last_side = 1;
    } else {
      hi = mid;
      fhi = fm;
      if (last_side == -1) flo *= 0.5;
      last_side = -1;
    }
    if (hi - lo <= 1e-11 * hi || fm == 0.0) break;
  }
  return 0.5 * (lo + hi);
}

ClutterModel fit_model(Family family, std::span<const double> samples,
                       const FitOptions& options) {
  if (samples.size() < 10)
    throw std::invalid_argument("fit_model: need at least 10 samples");
  if (family != Family::gaussian) {
    for (const double x : samples)
      if (!(x > 0.0))
        throw std::invalid_argument("fit_model: nonpositive sample for a positive-support family");
  }
  switch (family) {
    case Family::gaussian: {
      const auto f = gaussian_ml(samples);
      if (f.sigma == 0.0) throw fit_error("fit_model: zero-variance sample");
      return ClutterModel::gaussian(f.mu, f.sigma);
    }
    case Family::weibull: {
      const auto f = weibull_ml(samples);
      return ClutterModel::weibull(f.shape_c, f.scale_b);
    }
    case Family::gamma: {
      const double mean =
          kernels::active().sum(samples.data(), samples.size()) / static_cast<double>(samples.size());
      double shape;
      if (options.shape_mode == FitOptions::ShapeMode::fixed) {
        require_positive(options.fixed_shape, "fixed gamma shape");
        shape = options.fixed_shape;
      } else {
        shape = gamma_ml_shape(samples);
      }
      return ClutterModel::gamma(shape, mean / shape);
    }
    case Family::rayleigh:
      return ClutterModel::rayleigh(rayleigh_ml_sigma(samples));
    case Family::k: {
      const auto f = k_method_of_moments(samples);
      return ClutterModel::k_distribution(f.shape_nu, f.scale_b);
    }
  }
  throw std::logic_error("unreachable");
}

double estimate_enl(std::span<const double> amplitude_samples) {
  if (amplitude_samples.size() < 10)
    throw std::invalid_argument("estimate_enl: need at least 10 samples");
  double mean = 0.0, m2 = 0.0;
  for (const double a : amplitude_samples) {
    if (!(a >= 0.0)) throw std::invalid_argument("estimate_enl: negative amplitude");
    const double i = a * a;
    mean += i;
    m2 += i * i;
  }
  const double n = static_cast<double>(amplitude_samples.size());
  mean /= n;
  m2 /= n;
  const double var = m2 - mean * mean;
  if (!(var > 0.0)) throw degenerate_reference_error("estimate_enl: zero intensity variance");
  return mean * mean / var;
}

HistogramReport histogram_report(std::span<const double> samples, int bins,
                                 std::span<const FamilySpec> families) {
  if (bins < 1) throw std::invalid_argument("histogram_report: bins must be >= 1");
  if (samples.size() < static_cast<std::size_t>(bins) * 10)
    throw std::invalid_argument("histogram_report: need at least bins*10 samples");
  double max = 0.0;
  for (const double x : samples) {
    if (!(x >= 0.0)) throw std::invalid_argument("histogram_report: negative sample");
    max = std::max(max, x);
  }
  if (!(max > 0.0)) throw std::invalid_argument("histogram_report: all samples are zero");

  HistogramReport rep;
  rep.sample_count = static_cast<std::int64_t>(samples.size());
  const double width = max / bins;
  rep.edges.resize(bins + 1);
  rep.centers.resize(bins);
  for (int i = 0; i <= bins; ++i) rep.edges[i] = width * i;
  for (int i = 0; i < bins; ++i) rep.centers[i] = width * (i + 0.5);

  std::vector<std::int64_t> count(bins, 0);
  for (const double x : samples) {
    int bi = static_cast<int>(x / width);
    bi = std::clamp(bi, 0, bins - 1);
    ++count[bi];
  }
  rep.density.resize(bins);
  const double norm = 1.0 / (static_cast<double>(samples.size()) * width);
  for (int i = 0; i < bins; ++i) rep.density[i] = count[i] * norm;

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  rep.empirical_exceedance.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), rep.edges[i]);
    rep.empirical_exceedance[i] =
        static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
  }

  for (const auto& spec : families) {
    HistogramReport::FamilyColumn col;
    col.family = spec.family;
    col.label = spec.label.empty() ? family_name(spec.family) : spec.label;
    try {
      const ClutterModel model = fit_model(spec.family, samples, spec.options);
      col.ok = true;
      col.p1 = model.param1();
      col.p2 = model.param2();
      col.pdf.resize(bins);
      for (int i = 0; i < bins; ++i) col.pdf[i] = model.pdf(rep.centers[i]);
      col.exceedance.resize(bins + 1);
      for (int i = 0; i <= bins; ++i) col.exceedance[i] = model.sf(rep.edges[i]);
    } catch (const std::exception& e) {
      col.ok = false;
      col.error = e.what();
    }
    rep.families.push_back(std::move(col));
  }
  return rep;
}

}  // namespace wilcfar
