#include "gsd/bivariate_normal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gsd/normal.hpp"

namespace gsd::stat {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// Gauss-Legendre abscissae/weights (positive half, used symmetrically)
constexpr double kX6[3] = {0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
constexpr double kW6[3] = {0.1713244923791705, 0.3607615730481384, 0.4679139345726904};

constexpr double kX12[6] = {0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                            0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
constexpr double kW12[6] = {0.0471753363865118, 0.1069393259953183, 0.1600783285433464,
                            0.2031674267230659, 0.2334925365383547, 0.2491470458134029};

constexpr double kX20[10] = {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                             0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                             0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                             0.0765265211334973};
constexpr double kW20[10] = {0.0176140071391521, 0.0406014298003869, 0.0626720483341091,
                             0.0832767415767048, 0.1019301198172404, 0.1181945319615184,
                             0.1316886384491766, 0.1420961093183821, 0.1491729864726037,
                             0.1527533871307259};

// P(Z1 > h, Z2 > k) with correlation r (Genz's BVND)
double bvn_upper(double h, double k, double r) {
    const double* x;
    const double* w;
    int lg;
    const double ar = std::fabs(r);
    if (ar < 0.3) {
        x = kX6; w = kW6; lg = 3;
    } else if (ar < 0.75) {
        x = kX12; w = kW12; lg = 6;
    } else {
        x = kX20; w = kW20; lg = 10;
    }
    double hk = h * k;
    double bvn = 0.0;
    if (ar < 0.925) {
        if (ar > 0.0) {
            const double hs = 0.5 * (h * h + k * k);
            const double asr = std::asin(r);
            for (int i = 0; i < lg; ++i) {
                for (int is = -1; is <= 1; is += 2) {
                    const double sn = std::sin(asr * (is * x[i] + 1.0) / 2.0);
                    bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
                }
            }
            bvn = bvn * asr / (2.0 * kTwoPi);
        }
        return bvn + norm_cdf(-h) * norm_cdf(-k);
    }
    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    if (ar < 1.0) {
        const double as = (1.0 - r) * (1.0 + r);
        double a = std::sqrt(as);
        const double bs = (h - k) * (h - k);
        const double c = (4.0 - hk) / 8.0;
        const double d = (12.0 - hk) / 16.0;
        double asr = -(bs / as + hk) / 2.0;
        if (asr > -100.0)
            bvn = a * std::exp(asr) *
                  (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
        if (-hk < 100.0) {
            const double b = std::sqrt(bs);
            bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) * norm_cdf(-b / a) * b *
                   (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
        }
        a /= 2.0;
        for (int i = 0; i < lg; ++i) {
            for (int is = -1; is <= 1; is += 2) {
                const double xs = a * (is * x[i] + 1.0) * a * (is * x[i] + 1.0);
                const double rs = std::sqrt(1.0 - xs);
                asr = -(bs / xs + hk) / 2.0;
                if (asr > -100.0)
                    bvn += a * w[i] * std::exp(asr) *
                           (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
                            (1.0 + c * xs * (1.0 + d * xs)));
            }
        }
        bvn = -bvn / kTwoPi;
    }
    if (r > 0.0) return bvn + norm_cdf(-std::max(h, k));
    bvn = -bvn;
    if (k > h) bvn += norm_cdf(k) - norm_cdf(h);
    return bvn;
}

}  // namespace

double bvn_cdf(double h, double k, double rho) {
    if (std::isnan(h) || std::isnan(k) || std::isnan(rho))
        throw std::domain_error("bvn_cdf: NaN argument");
    if (rho > 1.0 || rho < -1.0) {
        if (std::fabs(rho) - 1.0 > 1e-12) throw std::domain_error("bvn_cdf: |rho| > 1");
        rho = rho > 0.0 ? 1.0 : -1.0;
    }
    if (std::isinf(h) || std::isinf(k)) {
        if ((std::isinf(h) && h < 0.0) || (std::isinf(k) && k < 0.0)) return 0.0;
        if (std::isinf(h) && std::isinf(k)) return 1.0;
        return std::isinf(h) ? norm_cdf(k) : norm_cdf(h);
    }
    if (rho == 1.0) return norm_cdf(std::min(h, k));
    if (rho == -1.0) return std::max(0.0, norm_cdf(h) + norm_cdf(k) - 1.0);
    if (rho == 0.0) return norm_cdf(h) * norm_cdf(k);
    const double p = bvn_upper(-h, -k, rho);
    return std::min(1.0, std::max(0.0, p));
}

}  // namespace gsd::stat
