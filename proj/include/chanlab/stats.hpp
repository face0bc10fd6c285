#pragma once

// Sample statistics with standard errors, Wilson intervals and the normal CDF.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace chanlab {

struct Estimate {
  double value = 0;
  double se = 0;
};

struct SampleSummary {
  std::size_t n = 0;
  Estimate mean;
  Estimate variance;
  std::vector<Estimate> raw;  // raw[p-1] estimates E[X^p]
  double min = 0;
  double max = 0;
};

// Raw moments 1..max_moment with the standard error of each sample mean, plus the
// unbiased variance with its delta-method standard error.
inline SampleSummary summarize(const std::vector<double>& x, int max_moment = 4) {
  SampleSummary out;
  out.n = x.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (x.empty()) {
    out.mean = out.variance = {nan, nan};
    out.raw.assign(static_cast<std::size_t>(max_moment), {nan, nan});
    out.min = out.max = nan;
    return out;
  }
  const double n = static_cast<double>(x.size());
  out.min = *std::min_element(x.begin(), x.end());
  out.max = *std::max_element(x.begin(), x.end());
  for (int p = 1; p <= max_moment; ++p) {
    double m = 0, m2 = 0;
    for (double v : x) {
      const double t = std::pow(v, p);
      m += t;
      m2 += t * t;
    }
    m /= n;
    m2 /= n;
    const double var = x.size() > 1 ? std::max(0.0, m2 - m * m) * n / (n - 1) : nan;
    out.raw.push_back({m, std::sqrt(var / n)});
  }
  double mean = 0;
  for (double v : x) mean += v;
  mean /= n;
  double c2 = 0, c4 = 0;
  for (double v : x) {
    const double e = (v - mean) * (v - mean);
    c2 += e;
    c4 += e * e;
  }
  c2 /= n;
  c4 /= n;
  out.mean = {mean, x.size() > 1 ? std::sqrt(c2 / (n - 1)) : nan};
  if (x.size() > 1) {
    const double s2 = c2 * n / (n - 1);
    const double v = (c4 - c2 * c2 * (n - 3) / (n - 1)) / n;
    out.variance = {s2, std::sqrt(std::max(0.0, v))};
  } else {
    out.variance = {nan, nan};
  }
  return out;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

struct Proportion {
  std::size_t hits = 0;
  std::size_t n = 0;
  double value = 0;
  double se = 0;
  double lo = 0;  // Wilson interval
  double hi = 0;
};

inline Proportion proportion(std::size_t hits, std::size_t n, double z = 1.959963984540054) {
  Proportion out{hits, n};
  if (n == 0) {
    out.value = out.se = out.lo = out.hi = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  out.value = p;
  out.se = std::sqrt(p * (1 - p) / nn);
  const double z2 = z * z;
  const double center = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z / (1 + z2 / nn) * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
  out.lo = std::max(0.0, center - half);
  out.hi = std::min(1.0, center + half);
  return out;
}

}  // namespace chanlab
