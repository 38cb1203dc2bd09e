#include "gsd/roots.hpp"

#include <cmath>
#include <stdexcept>

namespace gsd::stat {

double find_root(const std::function<double(double)>& g, double lo, double hi,
                 const RootOptions& opt) {
    if (!(hi > lo)) throw std::domain_error("find_root: invalid bracket");
    double a = lo, b = hi;
    double fa = g(a), fb = g(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) {
        if (!opt.expand_bracket)
            throw std::runtime_error("find_root: no sign change on bracket");
        const double w0 = hi - lo;
        double w = w0;
        while (fa * fb > 0.0) {
            if (w > opt.expand_limit * w0)
                throw std::runtime_error("find_root: no sign change after expansion");
            w *= 2.0;
            a = 0.5 * (lo + hi) - 0.5 * w;
            b = 0.5 * (lo + hi) + 0.5 * w;
            fa = g(a);
            fb = g(b);
            if (fa == 0.0) return a;
            if (fb == 0.0) return b;
        }
    }

    // Brent's method
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::fabs(b) + 0.5 * opt.tol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0 || std::fabs(fb) <= opt.tol) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::fmin(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::fabs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = g(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

}  // namespace gsd::stat
