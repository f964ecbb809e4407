#include "stylo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "stylo/error.hpp"

namespace stylo {

namespace {

// Ranks |d| with ties averaged; returned doubled so every rank is an integer.
std::vector<long> doubled_ranks(const std::vector<double>& magnitudes, double* tie_term) {
  const auto n = magnitudes.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return magnitudes[a] < magnitudes[b]; });
  std::vector<long> ranks(n);
  double ties = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && magnitudes[order[j + 1]] == magnitudes[order[i]]) ++j;
    // positions i..j (0-based) share rank ((i+1)+(j+1))/2; doubled: i+j+2
    const long r2 = static_cast<long>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r2;
    const double t = static_cast<double>(j - i + 1);
    ties += t * t * t - t;
    i = j + 1;
  }
  if (tie_term) *tie_term = ties;
  return ranks;
}

double exact_p(const std::vector<long>& ranks2, long w_plus2) {
  const long total = std::accumulate(ranks2.begin(), ranks2.end(), 0L);
  std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
  ways[0] = 1.0;
  for (long r : ranks2) {
    for (long s = total; s >= r; --s) ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - r)];
  }
  double lower = 0, upper = 0;
  for (long s = 0; s <= total; ++s) {
    if (s <= w_plus2) lower += ways[static_cast<std::size_t>(s)];
    if (s >= w_plus2) upper += ways[static_cast<std::size_t>(s)];
  }
  const double all = std::ldexp(1.0, static_cast<int>(ranks2.size()));
  return std::min(1.0, 2.0 * std::min(lower, upper) / all);
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank_diffs(std::span<const double> differences, WilcoxonMethod method) {
  if (differences.empty()) throw std::invalid_argument("wilcoxon_signed_rank needs at least one pair");
  std::vector<double> mags;
  std::vector<bool> positive;
  for (double d : differences) {
    if (!std::isfinite(d)) throw std::invalid_argument("wilcoxon_signed_rank: non-finite difference");
    if (d == 0.0) continue;
    mags.push_back(std::fabs(d));
    positive.push_back(d > 0);
  }
  WilcoxonResult res;
  res.n = mags.size();
  if (res.n == 0) {
    res.all_zero = true;
    res.p = 1.0;
    res.w_plus = res.w_minus = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  double tie_term = 0;
  const auto ranks2 = doubled_ranks(mags, &tie_term);
  long w_plus2 = 0, w_minus2 = 0;
  for (std::size_t i = 0; i < ranks2.size(); ++i) (positive[i] ? w_plus2 : w_minus2) += ranks2[i];
  res.w_plus = w_plus2 / 2.0;
  res.w_minus = w_minus2 / 2.0;

  const bool exact = method == WilcoxonMethod::Exact ||
                     (method == WilcoxonMethod::Auto && res.n <= kWilcoxonExactMaxN);
  res.exact = exact;
  if (exact) {
    res.p = exact_p(ranks2, w_plus2);
    return res;
  }
  const double n = static_cast<double>(res.n);
  const double mean = n * (n + 1) / 4.0;
  const double var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0;
  if (var <= 0) {
    res.p = 1.0;
    return res;
  }
  const double z = std::max(0.0, std::fabs(res.w_plus - mean) - 0.5) / std::sqrt(var);
  res.p = std::clamp(std::erfc(z / std::sqrt(2.0)), std::numeric_limits<double>::min(), 1.0);
  return res;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs, WilcoxonMethod method) {
  std::vector<double> diffs;
  diffs.reserve(pairs.size());
  for (const auto& [a, b] : pairs) diffs.push_back(b - a);
  return wilcoxon_signed_rank_diffs(diffs, method);
}

double bonferroni(double p_raw, std::size_t m) {
  if (m == 0) throw std::invalid_argument("bonferroni: m must be at least 1");
  return std::min(1.0, static_cast<double>(m) * p_raw);
}

double cohen_d_diffs(std::span<const double> d) {
  if (d.size() < 2) throw Error("cohen_d_paired needs at least two pairs");
  const double n = static_cast<double>(d.size());
  double mean = 0;
  for (double x : d) mean += x;
  mean /= n;
  double ss = 0;
  for (double x : d) ss += (x - mean) * (x - mean);
  if (ss == 0.0) throw ZeroVarianceError();
  return mean / std::sqrt(ss / (n - 1));
}

double cohen_d_paired(std::span<const std::pair<double, double>> pairs) {
  std::vector<double> diffs;
  diffs.reserve(pairs.size());
  for (const auto& [a, b] : pairs) diffs.push_back(b - a);
  return cohen_d_diffs(diffs);
}

}  // namespace stylo
