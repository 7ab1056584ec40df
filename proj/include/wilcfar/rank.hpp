#pragma once

// Exact null distribution of the two-sample rank-sum statistic.
//
// For m test samples and n reference samples drawn from the same continuous
// distribution, the rank-sum statistic S (sum of the ranks of the test
// samples in the pooled ordering) takes values k in
// [m(m+1)/2, m(m+2n+1)/2]. The number of arrangements with S = k satisfies
//
//   pi[m,n](k) = pi[m,n-1](k) + pi[m-1,n](k - m - n)
//
// with pi[i,0] a point mass at i(i+1)/2 and pi[0,j] a point mass at 0.
// The table is computed over the shifted index u = k - m(m+1)/2 (the
// Mann-Whitney support 0..m*n) with a rolling sweep over the reference
// count, and counts are kept as exact big integers so that tail sums down
// to 1e-8 and below carry no accumulation error. Probabilities are formed
// only at the very end, as one big-rational-to-double conversion.

#include <cstdint>
#include <memory>
#include <span>

#include <gmpxx.h>

namespace wilcfar {

class ExactRankDistribution {
 public:
  static constexpr std::uint64_t kDefaultSupportCap = 10'000'000;

  ExactRankDistribution(int m, int n,
                        std::uint64_t support_cap = kDefaultSupportCap);

  int m() const { return m_; }
  int n() const { return n_; }
  std::int64_t min_s() const { return min_s_; }
  std::int64_t max_s() const { return min_s_ + span_; }
  std::int64_t support_size() const { return span_ + 1; }

  // Arrangement count at shifted index u = s - min_s, u in [0, m*n].
  const mpz_class& count(std::int64_t u) const { return counts_[u]; }
  // binomial(m + n, m)
  const mpz_class& total() const { return total_; }

  double pmf(std::int64_t s) const;

  // P{ S >= threshold }. Thresholds outside the support are allowed.
  double tail_probability(std::int64_t threshold) const;
  mpq_class tail_exact(std::int64_t threshold) const;

  // Exact moments of S, for cross-checks against the closed forms
  // m(N+1)/2 and m*n*(N+1)/12.
  mpq_class mean_exact() const;
  mpq_class variance_exact() const;

 private:
  int m_, n_;
  std::int64_t min_s_, span_;
  std::vector<mpz_class> counts_;
  mpz_class total_;
};

ExactRankDistribution build_distribution(
    int m, int n,
    std::uint64_t support_cap = ExactRankDistribution::kDefaultSupportCap);

// Process-wide memo; one detection run reuses a single (m, n) millions of
// times. Safe under concurrent first access.
std::shared_ptr<const ExactRankDistribution> shared_distribution(
    int m, int n,
    std::uint64_t support_cap = ExactRankDistribution::kDefaultSupportCap);

struct RankThreshold {
  std::int64_t t_w;    // decision threshold on S; max_s + 1 means "never fire"
  std::int64_t t_mw;   // same threshold on the Mann-Whitney statistic
  double achieved_pfa; // exact tail probability at t_w
};

// Smallest integer threshold whose tail probability does not exceed the
// design false-alarm rate. The comparison against design_pfa is done in
// exact rational arithmetic.
RankThreshold threshold_for_pfa(const ExactRankDistribution& dist,
                                double design_pfa);

// Sum of the unit-step comparisons u(x_i - y_j), with ties scoring 1.
std::int64_t mann_whitney_statistic(std::span<const double> test,
                                    std::span<const double> reference);

// Rank-sum statistic: Mann-Whitney value shifted by m(m+1)/2. For tie-free
// inputs this equals the sum of the test samples' ranks in the pooled order.
std::int64_t wilcoxon_statistic(std::span<const double> test,
                                std::span<const double> reference);

}  // namespace wilcfar
