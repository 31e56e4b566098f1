#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace cqed {

template <typename Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f),
                  std::abs(f - static_cast<double>(i) / n)});
  }
  return d;
}

}  // namespace cqed
