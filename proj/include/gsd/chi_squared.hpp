#pragma once

namespace gsd::stat {

double chisq_pdf(double x, double k);
double chisq_cdf(double x, double k);
double chisq_quantile(double p, double k);

/// Density of the noncentral chi-squared distribution with k degrees of
/// freedom and noncentrality lambda, evaluated as a Poisson mixture of
/// central densities. The series is truncated adaptively on both sides of
/// the modal Poisson index; the neglected Poisson mass is kept below 1e-13,
/// which bounds the relative error well under the 1e-10 contract for
/// lambda up to about 1e4.
double chisq_noncentral_pdf(double x, double k, double lambda);

double chisq_noncentral_cdf(double x, double k, double lambda);

double chisq_noncentral_quantile(double p, double k, double lambda);

}  // namespace gsd::stat
