#include "wilcfar/rank.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "wilcfar/errors.hpp"
#include "wilcfar/kernels.hpp"

namespace wilcfar {

namespace {

// mpq_get_d truncates toward zero; pick the nearest double instead so the
// single rational-to-float conversion at the end is correctly rounded.
double to_nearest_double(const mpq_class& q) {
  const double d = q.get_d();
  if (!std::isfinite(d)) return d;
  double best = d;
  mpq_class err = abs(q - mpq_class(d));
  for (const double cand : {std::nextafter(d, std::numeric_limits<double>::infinity()),
                            std::nextafter(d, -std::numeric_limits<double>::infinity())}) {
    const mpq_class e = abs(q - mpq_class(cand));
    if (e < err) {
      err = e;
      best = cand;
    }
  }
  return best;
}

}  // namespace

ExactRankDistribution::ExactRankDistribution(int m, int n,
                                             std::uint64_t support_cap) {
  if (m < 0 || n < 0 || m + n < 1)
    throw std::invalid_argument("rank distribution needs m >= 0, n >= 0, m + n >= 1");
  const std::uint64_t support = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(n);
  if (support > support_cap)
    throw resource_limit_error("rank distribution support " + std::to_string(support) +
                               " exceeds cap " + std::to_string(support_cap));

  m_ = m;
  n_ = n;
  min_s_ = static_cast<std::int64_t>(m) * (m + 1) / 2;
  span_ = static_cast<std::int64_t>(support);

  // Rows row[i] hold the counts for i test samples at the current reference
  // count j; row 0 is the point mass of the no-test-sample boundary. Sweeping
  // j upward and i upward updates each row in place:
  //   row[i](u) at j  =  row[i](u) at j-1  +  row[i-1](u - j) at j.
  std::vector<std::vector<mpz_class>> row(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i)
    row[i].assign(static_cast<std::size_t>(i) * n + 1, mpz_class(0));
  for (int i = 0; i <= m; ++i) row[i][0] = 1;

  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= m; ++i) {
      auto& cur = row[i];
      const auto& below = row[i - 1];
      const std::int64_t hi = static_cast<std::int64_t>(i) * j;
      for (std::int64_t u = j; u <= hi; ++u) cur[u] += below[u - j];
    }
  }

  counts_ = std::move(row[m]);
  mpz_bin_uiui(total_.get_mpz_t(), static_cast<unsigned long>(m + n),
               static_cast<unsigned long>(m));
}

double ExactRankDistribution::pmf(std::int64_t s) const {
  const std::int64_t u = s - min_s_;
  if (u < 0 || u > span_) return 0.0;
  mpq_class q(counts_[u], total_);
  q.canonicalize();
  return to_nearest_double(q);
}

mpq_class ExactRankDistribution::tail_exact(std::int64_t threshold) const {
  std::int64_t u = threshold - min_s_;
  if (u <= 0) return mpq_class(1);
  if (u > span_) return mpq_class(0);
  mpz_class acc(0);
  for (std::int64_t v = u; v <= span_; ++v) acc += counts_[v];
  mpq_class q(acc, total_);
  q.canonicalize();
  return q;
}

double ExactRankDistribution::tail_probability(std::int64_t threshold) const {
  return to_nearest_double(tail_exact(threshold));
}

mpq_class ExactRankDistribution::mean_exact() const {
  mpz_class acc(0);
  for (std::int64_t u = 0; u <= span_; ++u) acc += counts_[u] * u;
  mpq_class mean_u(acc, total_);
  mean_u.canonicalize();
  return mean_u + min_s_;
}

mpq_class ExactRankDistribution::variance_exact() const {
  mpz_class s1(0), s2(0);
  for (std::int64_t u = 0; u <= span_; ++u) {
    s1 += counts_[u] * u;
    s2 += counts_[u] * u * u;
  }
  mpq_class e1(s1, total_), e2(s2, total_);
  e1.canonicalize();
  e2.canonicalize();
  return e2 - e1 * e1;  // shift-invariant
}

ExactRankDistribution build_distribution(int m, int n, std::uint64_t support_cap) {
  return ExactRankDistribution(m, n, support_cap);
}

std::shared_ptr<const ExactRankDistribution> shared_distribution(
    int m, int n, std::uint64_t support_cap) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const ExactRankDistribution>> cache;
  if (m >= 0 && n >= 0 &&
      static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(n) > support_cap)
    throw resource_limit_error("rank distribution support " +
                               std::to_string(static_cast<std::uint64_t>(m) * n) +
                               " exceeds cap " + std::to_string(support_cap));
  const auto key = std::make_pair(m, n);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto dist = std::make_shared<const ExactRankDistribution>(m, n, support_cap);
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(key, std::move(dist));
  return it->second;
}

RankThreshold threshold_for_pfa(const ExactRankDistribution& dist, double design_pfa) {
  if (!(design_pfa > 0.0) || design_pfa > 1.0)
    throw std::invalid_argument("design_pfa must be in (0, 1]");

  const mpq_class design(design_pfa);  // exact value of the double
  const std::int64_t span = dist.max_s() - dist.min_s();

  // Walk the support downward, accumulating the tail, as long as the exact
  // tail stays at or below the design rate.
  mpz_class acc(0);
  std::int64_t best_u = span + 1;
  mpz_class best_acc(0);
  for (std::int64_t u = span; u >= 0; --u) {
    acc += dist.count(u);
    mpq_class tail(acc, dist.total());
    tail.canonicalize();
    if (tail <= design) {
      best_u = u;
      best_acc = acc;
    } else {
      break;
    }
  }

  RankThreshold out;
  out.t_w = dist.min_s() + best_u;
  out.t_mw = best_u;
  if (best_u > span) {
    out.achieved_pfa = 0.0;
  } else {
    mpq_class tail(best_acc, dist.total());
    tail.canonicalize();
    out.achieved_pfa = to_nearest_double(tail);
  }
  return out;
}

std::int64_t mann_whitney_statistic(std::span<const double> test,
                                    std::span<const double> reference) {
  if (test.empty() || reference.empty())
    throw std::invalid_argument("mann_whitney_statistic: empty sample list");
  const auto& ops = kernels::active();
  std::int64_t s = 0;
  for (const double x : test) s += ops.count_ge(x, reference.data(), reference.size());
  return s;
}

std::int64_t wilcoxon_statistic(std::span<const double> test,
                                std::span<const double> reference) {
  const std::int64_t m = static_cast<std::int64_t>(test.size());
  return mann_whitney_statistic(test, reference) + m * (m + 1) / 2;
}

}  // namespace wilcfar
