#include "gsd/chi_squared.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gsd/normal.hpp"
#include "gsd/special.hpp"

namespace gsd::stat {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321;

void check_central(double x, double k) {
    if (x < 0.0) throw std::domain_error("chi squared: x must be >= 0");
    if (!(k > 0.0)) throw std::domain_error("chi squared: df must be > 0");
}

double log_chisq_pdf(double x, double k) {
    // x > 0
    return (0.5 * k - 1.0) * std::log(x) - 0.5 * x - 0.5 * k * kLn2 - std::lgamma(0.5 * k);
}

// Sums sum_j pois(j; lambda/2) * term(k + 2j) outward from the modal Poisson
// index until the neglected Poisson mass falls below 1e-13 on both sides.
template <class Term>
double poisson_mixture(double lambda, Term term) {
    const double mean = 0.5 * lambda;
    const long j0 = static_cast<long>(mean);
    double w0 = poisson_pmf(j0, mean);
    double sum = w0 * term(j0);
    double mass = w0;
    double w = w0;
    for (long j = j0 + 1; j < j0 + 100000; ++j) {
        w *= mean / static_cast<double>(j);
        sum += w * term(j);
        mass += w;
        if (w < 1e-17 && 1.0 - mass < 1e-13) break;
        if (w < 1e-17 && j > j0 + 10) break;
    }
    w = w0;
    for (long j = j0 - 1; j >= 0; --j) {
        w *= static_cast<double>(j + 1) / mean;
        sum += w * term(j);
        mass += w;
        if (w < 1e-17) break;
    }
    return sum;
}

}  // namespace

double chisq_pdf(double x, double k) {
    check_central(x, k);
    if (x == 0.0) {
        if (k > 2.0) return 0.0;
        if (k == 2.0) return 0.5;
        return std::numeric_limits<double>::infinity();
    }
    return std::exp(log_chisq_pdf(x, k));
}

double chisq_cdf(double x, double k) {
    check_central(x, k);
    return gamma_p(0.5 * k, 0.5 * x);
}

double chisq_quantile(double p, double k) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("chisq_quantile: p must lie in (0,1)");
    if (!(k > 0.0)) throw std::domain_error("chisq_quantile: df must be > 0");
    // Wilson-Hilferty start, then safeguarded Newton on the CDF
    const double z = norm_quantile(p);
    const double c = 2.0 / (9.0 * k);
    double x = k * std::pow(1.0 - c + z * std::sqrt(c), 3.0);
    if (!(x > 0.0) || !std::isfinite(x)) x = k;
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        const double f = chisq_cdf(x, k) - p;
        if (f > 0.0) hi = x; else lo = x;
        const double d = chisq_pdf(x, k);
        double xn = d > 0.0 ? x - f / d : std::numeric_limits<double>::quiet_NaN();
        if (!(xn > lo && xn < hi))
            xn = std::isfinite(hi) ? 0.5 * (lo + hi) : (lo > 0.0 ? 2.0 * lo : 1.0);
        const double delta = std::fabs(xn - x);
        x = xn;
        if (delta <= 1e-12 * (1.0 + x)) break;
    }
    return x;
}

double chisq_noncentral_pdf(double x, double k, double lambda) {
    check_central(x, k);
    if (lambda < 0.0) throw std::domain_error("noncentral chi squared: lambda must be >= 0");
    if (!(k >= 1.0)) throw std::domain_error("noncentral chi squared: require df >= 1");
    if (lambda == 0.0) return chisq_pdf(x, k);
    if (x == 0.0) return k == 2.0 ? 0.5 * std::exp(-0.5 * lambda) : chisq_pdf(x, k) * std::exp(-0.5 * lambda);
    return poisson_mixture(lambda, [&](long j) {
        return std::exp(log_chisq_pdf(x, k + 2.0 * static_cast<double>(j)));
    });
}

double chisq_noncentral_cdf(double x, double k, double lambda) {
    check_central(x, k);
    if (lambda < 0.0) throw std::domain_error("noncentral chi squared: lambda must be >= 0");
    if (lambda == 0.0) return chisq_cdf(x, k);
    if (x == 0.0) return 0.0;
    double v = poisson_mixture(lambda, [&](long j) {
        return gamma_p(0.5 * k + static_cast<double>(j), 0.5 * x);
    });
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

double chisq_noncentral_quantile(double p, double k, double lambda) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("chisq_noncentral_quantile: p must lie in (0,1)");
    if (lambda == 0.0) return chisq_quantile(p, k);
    const double mean = k + lambda;
    const double sd = std::sqrt(2.0 * (k + 2.0 * lambda));
    double lo = 0.0;
    double hi = mean + 8.0 * sd;
    while (chisq_noncentral_cdf(hi, k, lambda) < p) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (chisq_noncentral_cdf(mid, k, lambda) < p) lo = mid; else hi = mid;
        if (hi - lo <= 1e-12 * (1.0 + hi)) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace gsd::stat
