#pragma once

#include <span>

namespace ccdo {

struct RankSumResult {
  double statistic = 0.0;  // rank sum of the first sample
  double z = 0.0;
  double p_value = 1.0;
  bool significant = false;  // p < alpha
};

/// Two-sided Wilcoxon rank-sum test with midranks for ties and the normal
/// approximation (tie-corrected variance, no continuity correction). Both
/// samples must be non-empty; identical values throughout give p = 1.
RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b,
                                double alpha = 0.05);

}  // namespace ccdo
