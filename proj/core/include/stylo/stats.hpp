#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace stylo {

/// Largest effective sample size that uses the exact null distribution.
inline constexpr std::size_t kWilcoxonExactMaxN = 25;

enum class WilcoxonMethod { Auto, Exact, Normal };

struct WilcoxonResult {
  double w_plus = 0;   ///< sum of ranks of positive differences; NaN when all_zero
  double w_minus = 0;
  double p = 1;        ///< two-sided
  std::size_t n = 0;   ///< pairs left after dropping zero differences
  bool all_zero = false;
  bool exact = false;
};

/// Paired Wilcoxon signed-rank test on differences second - first.
///
/// Zero differences are dropped and tied magnitudes share their average rank.
/// With Auto, n <= 25 uses the exact permutation distribution of W+ over all
/// 2^n sign assignments (computed by convolution over the actual, possibly
/// tied, ranks); larger n uses the normal approximation with tie-corrected
/// variance and a 0.5 continuity correction.
WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    WilcoxonMethod method = WilcoxonMethod::Auto);
WilcoxonResult wilcoxon_signed_rank_diffs(std::span<const double> differences,
                                          WilcoxonMethod method = WilcoxonMethod::Auto);

/// min(1, m * p).
double bonferroni(double p_raw, std::size_t m);

/// mean(second - first) / sd(second - first), sd with n - 1 denominator.
/// Throws ZeroVarianceError for constant differences, Error for n < 2.
double cohen_d_paired(std::span<const std::pair<double, double>> pairs);
double cohen_d_diffs(std::span<const double> differences);

}  // namespace stylo
