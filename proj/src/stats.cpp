#include "satsp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "satsp/io.hpp"

namespace satsp {

EmpiricalCdf::EmpiricalCdf(std::span<const double> samples) : sorted_(samples.begin(), samples.end()) {
  if (sorted_.empty()) throw std::invalid_argument("empirical CDF needs at least one sample");
  for (double x : sorted_)
    if (std::isnan(x)) throw std::invalid_argument("empirical CDF sample is NaN");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double j) const {
  const auto at_or_below = std::upper_bound(sorted_.begin(), sorted_.end(), j) - sorted_.begin();
  return static_cast<double>(at_or_below) / static_cast<double>(sorted_.size());
}

std::vector<std::pair<double, double>> EmpiricalCdf::steps() const {
  std::vector<std::pair<double, double>> out;
  const double count = static_cast<double>(sorted_.size());
  for (std::size_t i = 0; i < sorted_.size(); ++i)
    if (i + 1 == sorted_.size() || sorted_[i + 1] != sorted_[i])
      out.emplace_back(sorted_[i], static_cast<double>(i + 1) / count);
  return out;
}

void EmpiricalCdf::write_csv(std::ostream& out) const {
  out << "j,F\n";
  for (const auto& [j, f] : steps()) out << format_real(j) << ',' << format_real(f) << '\n';
}

double dkw_epsilon(std::int64_t count, double delta) {
  if (count < 1) throw std::invalid_argument("DKW band needs count >= 1");
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("DKW delta must lie in (0, 1)");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(count)));
}

namespace {

// Calls visit(j, Fa(j), Fb(j)) at every pooled jump point in increasing order.
template <typename Visit>
void walk_jumps(const EmpiricalCdf& fa, const EmpiricalCdf& fb, Visit&& visit) {
  const auto& xa = fa.sorted_samples();
  const auto& xb = fb.sorted_samples();
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  std::size_t ia = 0;
  std::size_t ib = 0;
  while (ia < xa.size() || ib < xb.size()) {
    double j;
    if (ib == xb.size() || (ia < xa.size() && xa[ia] <= xb[ib])) {
      j = xa[ia];
    } else {
      j = xb[ib];
    }
    while (ia < xa.size() && xa[ia] <= j) ++ia;
    while (ib < xb.size() && xb[ib] <= j) ++ib;
    visit(j, static_cast<double>(ia) / na, static_cast<double>(ib) / nb);
  }
}

}  // namespace

double dominance_gap(const EmpiricalCdf& fq, const EmpiricalCdf& fa) {
  const double top = std::max(fq.sorted_samples().back(), fa.sorted_samples().back());
  bool any = false;
  double gap = 0.0;
  walk_jumps(fq, fa, [&](double j, double q, double a) {
    if (j >= top) return;
    gap = any ? std::max(gap, q - a) : q - a;
    any = true;
  });
  return any ? gap : 0.0;
}

double ks_distance(const EmpiricalCdf& fa, const EmpiricalCdf& fb) {
  double worst = 0.0;
  walk_jumps(fa, fb, [&](double, double a, double b) { worst = std::max(worst, std::abs(a - b)); });
  return worst;
}

DominanceReport dominance_test(const EmpiricalCdf& fq, const EmpiricalCdf& fa, double delta) {
  DominanceReport report;
  report.gap = dominance_gap(fq, fa);
  report.band_q = dkw_epsilon(fq.count(), delta);
  report.band_a = dkw_epsilon(fa.count(), delta);
  report.delta = delta;
  report.count_q = fq.count();
  report.count_a = fa.count();
  report.passed = report.gap <= report.band_q + report.band_a;
  return report;
}

MeanEstimate mean_estimate(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty sample");
  const double count = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= count;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (count - 1) / count)};
}

MeanEstimate batch_means(std::span<const double> series, int batches) {
  if (batches < 2) throw std::invalid_argument("batch means needs at least 2 batches");
  const std::size_t size = series.size() / static_cast<std::size_t>(batches);
  if (size == 0) throw std::invalid_argument("series shorter than the batch count");
  std::vector<double> means(static_cast<std::size_t>(batches));
  for (int b = 0; b < batches; ++b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < size; ++i) sum += series[static_cast<std::size_t>(b) * size + i];
    means[static_cast<std::size_t>(b)] = sum / static_cast<double>(size);
  }
  return mean_estimate(means);
}

}  // namespace satsp
