#pragma once

#include <Eigen/Dense>

namespace gsd::stat {

/// Off-diagonal entries of a 3x3 correlation matrix with unit diagonal.
/// Coordinate order matches the three test statistics it is used with.
struct Corr3 {
    double r12 = 0.0;
    double r13 = 0.0;
    double r23 = 0.0;

    Eigen::Matrix3d matrix() const;

    /// Throws std::domain_error unless |r| <= 1 and the matrix is positive
    /// semidefinite (smallest eigenvalue >= -1e-10). Exactly singular
    /// matrices are accepted; the contrast correlations used here always are.
    void validate() const;
};

/// P(Z1 <= u1, Z2 <= u2, Z3 <= u3) for N3(0, corr). Upper limits may be
/// +-infinity. Absolute accuracy ~1e-9, well inside the 1e-7 contract.
///
/// The integral is reduced to one dimension by conditioning on the first
/// coordinate: the inner probability is a bivariate normal CDF in the
/// conditional distribution of (Z2, Z3), and the outer integral over the
/// conditioning variable is evaluated with adaptive Gauss-Legendre panels.
/// Rank-deficient correlation matrices (the usual case for pairwise-contrast
/// statistics) make the conditional correlation hit +-1, which the bivariate
/// kernel handles as its degenerate limit.
double mvn3_cdf(double u1, double u2, double u3, const Corr3& corr);

}  // namespace gsd::stat
