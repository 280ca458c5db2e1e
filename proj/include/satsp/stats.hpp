#ifndef SATSP_STATS_HPP_
#define SATSP_STATS_HPP_

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace satsp {

/// Right-continuous step CDF of a finite sample, F(j) = #{samples <= j} / count.
class EmpiricalCdf {
 public:
  /// Sorted copy of `samples`; throws on empty input.
  explicit EmpiricalCdf(std::span<const double> samples);

  std::int64_t count() const { return static_cast<std::int64_t>(sorted_.size()); }
  const std::vector<double>& sorted_samples() const { return sorted_; }

  double operator()(double j) const;

  /// Distinct sample values with the CDF value at each, as (j, F) pairs.
  std::vector<std::pair<double, double>> steps() const;

  /// CSV "j,F", one row per distinct sample value.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<double> sorted_;
};

inline EmpiricalCdf ecdf(std::span<const double> samples) { return EmpiricalCdf(samples); }

/// DKW half-width sqrt(ln(2/delta) / (2 count)): with probability >= 1 - delta the
/// true CDF lies within this distance of the ECDF everywhere.
double dkw_epsilon(std::int64_t count, double delta);

/// sup_j (Fq(j) - Fa(j)) over the pooled jump points below the largest pooled sample.
/// At and above that point both CDFs equal 1, so it is excluded; if no point
/// remains (every sample identical) the gap is 0. First-order dominance of the
/// q law over the a law means Fq <= Fa, i.e. a nonpositive gap.
double dominance_gap(const EmpiricalCdf& fq, const EmpiricalCdf& fa);

/// sup_j |Fa(j) - Fb(j)| over the pooled jump points.
double ks_distance(const EmpiricalCdf& fa, const EmpiricalCdf& fb);

/// Sup distance between an ECDF and a continuous reference CDF, checking both
/// sides of every jump.
template <typename Cdf>
double ks_distance_to(const EmpiricalCdf& f, const Cdf& reference) {
  const auto& xs = f.sorted_samples();
  const double count = static_cast<double>(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double ref = reference(xs[i]);
    const double below = static_cast<double>(i) / count;
    const double above = static_cast<double>(i + 1) / count;
    worst = std::max({worst, ref - below, above - ref});
  }
  return worst;
}

struct DominanceReport {
  double gap = 0;
  double band_q = 0;
  double band_a = 0;
  double delta = 0;
  std::int64_t count_q = 0;
  std::int64_t count_a = 0;
  bool passed = false;  // gap <= band_q + band_a
};

/// The band-certified dominance test: gap <= dkw(count_q) + dkw(count_a).
DominanceReport dominance_test(const EmpiricalCdf& fq, const EmpiricalCdf& fa, double delta = 0.01);

/// Mean and standard error of a sample (n - 1 denominator).
struct MeanEstimate {
  double mean = 0;
  double std_error = 0;
};
MeanEstimate mean_estimate(std::span<const double> values);

/// Batch-means estimate for an autocorrelated series: the series is cut into
/// `batches` equal blocks and the standard error is taken over block means.
MeanEstimate batch_means(std::span<const double> series, int batches = 50);

}  // namespace satsp

#endif  // SATSP_STATS_HPP_
