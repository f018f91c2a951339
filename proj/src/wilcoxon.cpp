#include "ccdo/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ccdo {

RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b,
                                double alpha) {
  if (a.empty() || b.empty()) throw std::invalid_argument("wilcoxon_rank_sum: empty sample");
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;

  std::vector<std::pair<double, int>> pooled;  // value, sample (0 = a)
  for (double v : a) pooled.emplace_back(v, 0);
  for (double v : b) pooled.emplace_back(v, 1);
  std::sort(pooled.begin(), pooled.end());

  double rank_sum_a = 0.0;
  double tie_term = 0.0;  // sum of t^3 - t over tie groups
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].first == pooled[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].second == 0) rank_sum_a += midrank;
    }
    tie_term += t * t * t - t;
    i = j;
  }

  RankSumResult r;
  r.statistic = rank_sum_a;
  const double mean = n1 * (n + 1.0) / 2.0;
  const double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(var > 0.0)) return r;
  r.z = (rank_sum_a - mean) / std::sqrt(var);
  r.p_value = std::min(1.0, std::erfc(std::abs(r.z) / std::sqrt(2.0)));
  r.significant = r.p_value < alpha;
  return r;
}

}  // namespace ccdo
