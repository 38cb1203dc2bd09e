#include "gsd/trivariate_normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gsd/bivariate_normal.hpp"
#include "gsd/normal.hpp"
#include "gsd/quadrature.hpp"

namespace gsd::stat {

namespace {

constexpr double kZCut = 8.75;  // Phi(-8.75) ~ 1.1e-18

struct Conditional {
    double r2, r3;       // correlations of the two inner coordinates with Z1
    double s2, s3;       // conditional standard deviations
    double rho;          // conditional correlation, clamped to [-1, 1]
};

Conditional make_conditional(double r12, double r13, double r23) {
    Conditional c;
    c.r2 = r12;
    c.r3 = r13;
    c.s2 = std::sqrt(std::max(0.0, 1.0 - r12 * r12));
    c.s3 = std::sqrt(std::max(0.0, 1.0 - r13 * r13));
    double rho = (r23 - r12 * r13);
    const double denom = c.s2 * c.s3;
    rho = denom > 0.0 ? rho / denom : (rho >= 0.0 ? 1.0 : -1.0);
    c.rho = std::clamp(rho, -1.0, 1.0);
    return c;
}

}  // namespace

Eigen::Matrix3d Corr3::matrix() const {
    Eigen::Matrix3d m;
    m << 1.0, r12, r13,
         r12, 1.0, r23,
         r13, r23, 1.0;
    return m;
}

void Corr3::validate() const {
    for (double r : {r12, r13, r23})
        if (!(std::fabs(r) <= 1.0))
            throw std::domain_error("Corr3: correlations must lie in [-1, 1]");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(matrix(),
                                                          Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10)
        throw std::domain_error("Corr3: correlation matrix is not positive semidefinite");
}

double mvn3_cdf(double u1, double u2, double u3, const Corr3& corr) {
    corr.validate();
    if (std::isnan(u1) || std::isnan(u2) || std::isnan(u3))
        throw std::domain_error("mvn3_cdf: NaN upper limit");

    const double inf = std::numeric_limits<double>::infinity();
    if (u1 == -inf || u2 == -inf || u3 == -inf) return 0.0;
    if (u1 == inf) return bvn_cdf(u2, u3, corr.r23);
    if (u2 == inf) return bvn_cdf(u1, u3, corr.r13);
    if (u3 == inf) return bvn_cdf(u1, u2, corr.r12);

    // perfectly correlated pairs collapse to two dimensions
    if (std::fabs(corr.r12) >= 1.0 - 1e-12) {
        if (corr.r12 > 0.0) return bvn_cdf(std::min(u1, u2), u3, corr.r13);
        // Z2 = -Z1: P(-u2 <= Z1 <= u1, Z3 <= u3)
        return std::max(0.0, bvn_cdf(u1, u3, corr.r13) - bvn_cdf(-u2, u3, corr.r13));
    }
    if (std::fabs(corr.r13) >= 1.0 - 1e-12) {
        if (corr.r13 > 0.0) return bvn_cdf(std::min(u1, u3), u2, corr.r12);
        return std::max(0.0, bvn_cdf(u1, u2, corr.r12) - bvn_cdf(-u3, u2, corr.r12));
    }

    // condition on Z1
    const Conditional c = make_conditional(corr.r12, corr.r13, corr.r23);
    const double hi = std::min(u1, kZCut);
    const double lo = -kZCut;
    if (hi <= lo) return 0.0;

    auto integrand = [&](double z) {
        const double h = (u2 - c.r2 * z) / c.s2;
        const double k = (u3 - c.r3 * z) / c.s3;
        return norm_pdf(z) * bvn_cdf(h, k, c.rho);
    };

    // for singular matrices the inner CDF is a min/max of two lines in z;
    // splitting at their crossing keeps the adaptive pass cheap
    std::vector<double> edges{lo, hi};
    if (std::fabs(c.rho) >= 1.0 - 1e-12) {
        const double den = c.r3 * c.s2 - c.r2 * c.s3;
        if (std::fabs(den) > 1e-14) {
            const double zk = (u3 * c.s2 - u2 * c.s3) / den;
            if (zk > lo && zk < hi) edges.insert(edges.begin() + 1, zk);
        }
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        total += integrate_adaptive([&](double z) { return integrand(z); }, edges[i],
                                    edges[i + 1], 2e-10).value;
    return std::clamp(total, 0.0, 1.0);
}

}  // namespace gsd::stat
