#pragma once

namespace gsd::stat {

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double inc_beta(double a, double b, double x);

/// Poisson probability mass exp(-mean) mean^k / k!, stable in log space.
double poisson_pmf(long k, double mean);

}  // namespace gsd::stat
