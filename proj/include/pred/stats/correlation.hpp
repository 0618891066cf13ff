#pragma once

#include <cstdint>
#include <span>

namespace pred::stats {

struct Correlation {
  double r = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Sample Pearson r. Throws DomainError for unequal lengths, fewer than 3
// points, or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

// r with a percentile 95% interval from seeded paired resampling of
// (x_i, y_i). Resamples with zero variance are skipped.
Correlation pearson_with_ci(std::span<const double> x, std::span<const double> y,
                            int resamples = 10000, std::uint64_t seed = 0);

}  // namespace pred::stats
