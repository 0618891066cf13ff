#include "pred/stats/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pred/error.hpp"

namespace pred::stats {

double paired_permutation_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("paired samples differ in length");
  const std::size_t n = a.size();
  if (n == 0) throw DomainError("paired samples are empty");
  if (n > 20) throw DomainError("exact enumeration is limited to 20 pairs");

  std::vector<double> d(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = a[i] - b[i];
    scale += std::abs(d[i]);
  }
  double observed = 0.0;
  for (double v : d) observed += v;
  observed = std::abs(observed);
  // Sums that equal the observed one up to rounding count as ties.
  const double slack = 1e-12 * scale;

  const std::uint32_t total = 1u << n;
  std::uint32_t extreme = 0;
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (mask >> i & 1u) ? -d[i] : d[i];
    if (std::abs(s) >= observed - slack) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

double bonferroni(double p, int m) {
  if (m < 1) throw DomainError("Bonferroni factor must be at least 1");
  return std::min(1.0, p * m);
}

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sem(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double n = static_cast<double>(x.size());
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

}  // namespace pred::stats
