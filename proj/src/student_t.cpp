#include "gsd/student_t.hpp"

#include <cmath>
#include <stdexcept>

#include "gsd/normal.hpp"
#include "gsd/special.hpp"

namespace gsd::stat {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_nu(double nu) {
    if (!(nu > 0.0)) throw std::domain_error("student t: degrees of freedom must be > 0");
}
}  // namespace

double t_pdf(double t, double nu) {
    check_nu(nu);
    const double lg = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                      0.5 * std::log(nu * kPi) -
                      0.5 * (nu + 1.0) * std::log1p(t * t / nu);
    return std::exp(lg);
}

double t_cdf(double t, double nu) {
    check_nu(nu);
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double x = nu / (nu + t * t);
    const double half_tail = 0.5 * inc_beta(0.5 * nu, 0.5, x);
    return t <= 0.0 ? half_tail : 1.0 - half_tail;
}

double t_quantile(double p, double nu) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("t_quantile: p must lie in (0,1)");
    if (nu <= 0.0) throw std::domain_error("t_quantile: degrees of freedom must be > 0");
    if (p == 0.5) return 0.0;

    // Cornish-Fisher expansion about the normal quantile as the starting point
    const double x = norm_quantile(p);
    const double x2 = x * x;
    const double g1 = x * (x2 + 1.0) / 4.0;
    const double g2 = x * ((5.0 * x2 + 16.0) * x2 + 3.0) / 96.0;
    const double g3 = x * (((3.0 * x2 + 19.0) * x2 + 17.0) * x2 - 15.0) / 384.0;
    const double g4 =
        x * ((((79.0 * x2 + 776.0) * x2 + 1482.0) * x2 - 1920.0) * x2 - 945.0) / 92160.0;
    double t = x + g1 / nu + g2 / (nu * nu) + g3 / (nu * nu * nu) + g4 / (nu * nu * nu * nu);
    if (nu <= 1.5) t = std::tan(kPi * (p - 0.5));  // expansion is poor near the Cauchy case
    if (!std::isfinite(t)) t = x;

    // bracket the root, then safeguarded Newton
    double lo = t, hi = t;
    double flo = t_cdf(lo, nu) - p;
    double fhi = flo;
    double step = 1.0 + std::fabs(t);
    int guard = 0;
    while (flo > 0.0) {
        lo -= step;
        step *= 2.0;
        flo = t_cdf(lo, nu) - p;
        if (++guard > 200) throw std::runtime_error("t_quantile: bracketing failed");
    }
    step = 1.0 + std::fabs(t);
    while (fhi < 0.0) {
        hi += step;
        step *= 2.0;
        fhi = t_cdf(hi, nu) - p;
        if (++guard > 200) throw std::runtime_error("t_quantile: bracketing failed");
    }
    for (int it = 0; it < 100; ++it) {
        const double f = t_cdf(t, nu) - p;
        if (f > 0.0) hi = t; else lo = t;
        const double d = t_pdf(t, nu);
        double tn = d > 0.0 ? t - f / d : 0.5 * (lo + hi);
        if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
        const double delta = std::fabs(tn - t);
        t = tn;
        if (delta <= 1e-13 * (1.0 + std::fabs(t)) || hi - lo <= 1e-13 * (1.0 + std::fabs(t)))
            break;
    }
    return t;
}

}  // namespace gsd::stat
