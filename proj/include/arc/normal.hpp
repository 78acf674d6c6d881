#pragma once

namespace arc {

/// Standard normal density.
double normal_pdf(double z);

/// Standard normal distribution function, accurate in both tails
/// (computed through erfc).
double normal_cdf(double z);

/// Inverse of normal_cdf on (0, 1). Absolute error below 1e-13:
/// rational initial guess refined by two Halley steps on the erfc-based CDF.
/// Throws std::domain_error for p outside (0, 1).
double normal_quantile(double p);

/// Quantile of the chi-squared distribution with two degrees of freedom,
/// -2 ln(1 - p) in closed form. Valid for p in [0, 1); throws
/// std::domain_error otherwise.
double chi2_2_quantile(double p);

} // namespace arc
