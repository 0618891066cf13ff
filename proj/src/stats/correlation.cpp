#include "pred/stats/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "pred/error.hpp"
#include "pred/random.hpp"

namespace pred::stats {

namespace {

std::optional<double> pearson_indexed(std::span<const double> x, std::span<const double> y,
                                      const std::vector<std::size_t>& idx) {
  const double n = static_cast<double>(idx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i : idx) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i : idx) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// Linear interpolation between order statistics (the common "type 7" rule).
double quantile(const std::vector<double>& sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("correlation inputs differ in length");
  if (x.size() < 3) throw DomainError("correlation needs at least 3 points");
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto r = pearson_indexed(x, y, idx);
  if (!r) throw DomainError("correlation input has zero variance");
  return *r;
}

Correlation pearson_with_ci(std::span<const double> x, std::span<const double> y,
                            int resamples, std::uint64_t seed) {
  Correlation out;
  out.r = pearson(x, y);
  Rng rng(seed);
  std::vector<double> rs;
  rs.reserve(static_cast<std::size_t>(std::max(resamples, 0)));
  std::vector<std::size_t> idx(x.size());
  for (int b = 0; b < resamples; ++b) {
    for (auto& i : idx) i = static_cast<std::size_t>(rng.below(x.size()));
    if (auto r = pearson_indexed(x, y, idx)) rs.push_back(*r);
  }
  if (rs.empty()) {
    out.ci_low = out.ci_high = out.r;
    return out;
  }
  std::sort(rs.begin(), rs.end());
  out.ci_low = quantile(rs, 0.025);
  out.ci_high = quantile(rs, 0.975);
  return out;
}

}  // namespace pred::stats
