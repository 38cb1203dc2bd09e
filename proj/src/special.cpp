#include "gsd/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gsd::stat {

namespace {

constexpr double kEps = 1e-16;
constexpr double kFpMin = 1e-300;
constexpr int kMaxIter = 500;

// series representation, valid for x < a + 1
double gamma_p_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_p: series did not converge");
}

// continued fraction for Q, valid for x >= a + 1 (modified Lentz)
double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_q: continued fraction did not converge");
}

// continued fraction for the incomplete beta (modified Lentz)
double beta_cf(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("inc_beta: continued fraction did not converge");
}

}  // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_p: require a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_q: require a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double inc_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw std::domain_error("inc_beta: require a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(lbt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double poisson_pmf(long k, double mean) {
    if (k < 0) return 0.0;
    if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
    if (mean < 0.0) throw std::domain_error("poisson_pmf: mean must be >= 0");
    const double kk = static_cast<double>(k);
    return std::exp(kk * std::log(mean) - mean - std::lgamma(kk + 1.0));
}

}  // namespace gsd::stat
