#pragma once

#include <span>

namespace pred::stats {

// Exact two-sided paired sign-flip test on mean(a - b). All 2^n sign
// assignments are enumerated, so n is limited to 20. Throws DomainError on
// length mismatch, empty input, or n > 20.
double paired_permutation_test(std::span<const double> a, std::span<const double> b);

// min(1, m p)
double bonferroni(double p, int m);

double mean(std::span<const double> x);
// Standard error of the mean with the n-1 denominator; 0 for n < 2.
double sem(std::span<const double> x);

}  // namespace pred::stats
