#pragma once

namespace gsd::stat {

/// Density of Student's t with nu degrees of freedom (nu may be non-integral).
double t_pdf(double t, double nu);

/// Lower-tail CDF of Student's t.
double t_cdf(double t, double nu);

/// Lower-tail p-quantile of Student's t. Negative for p < 1/2, so for a
/// one-sided level alpha the rejection boundary is t_quantile(alpha, nu).
double t_quantile(double p, double nu);

}  // namespace gsd::stat
