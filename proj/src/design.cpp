#include "gsd/design.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gsd/student_t.hpp"

namespace gsd {

void AllocationRatio::validate() const {
    if (r_e < 1 || r_r < 1 || r_p < 1)
        throw std::domain_error("AllocationRatio: all ratio entries must be >= 1");
}

AllocationRatio AllocationRatio::parse(const std::string& text) {
    AllocationRatio a;
    char colon1 = 0, colon2 = 0;
    std::istringstream in(text);
    if (!(in >> a.r_e >> colon1 >> a.r_r >> colon2 >> a.r_p) || colon1 != ':' || colon2 != ':')
        throw std::invalid_argument("AllocationRatio: expected 'E:R:P', got '" + text + "'");
    std::string rest;
    if (in >> rest) throw std::invalid_argument("AllocationRatio: trailing text in '" + text + "'");
    a.validate();
    return a;
}

std::string AllocationRatio::str() const {
    return std::to_string(r_e) + ":" + std::to_string(r_r) + ":" + std::to_string(r_p);
}

void DesignSpec::validate() const {
    alloc.validate();
    if (!(sigma > 0.0)) throw std::domain_error("DesignSpec: sigma must be > 0");
    if (!(delta_er > 0.0)) throw std::domain_error("DesignSpec: delta_er must be > 0");
    if (delta_ep < 0.0 || delta_rp < 0.0)
        throw std::domain_error("DesignSpec: superiority margins must be >= 0");
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::domain_error("DesignSpec: alpha must lie in (0, 0.5)");
    if (!(target_power > 0.5 && target_power < 1.0))
        throw std::domain_error("DesignSpec: target power must lie in (0.5, 1)");
}

bool DesignSpec::in_h1() const {
    return (mu_e - mu_r < delta_er) && (mu_p - mu_e > delta_ep) && (mu_p - mu_r > delta_rp);
}

DesignSpec DesignSpec::with_sigma(double s) const {
    DesignSpec out = *this;
    out.sigma = s;
    return out;
}

stat::Corr3 covariance_matrix(const GroupSizes& sizes) {
    const double ne = sizes.n_e, nr = sizes.n_r, np = sizes.n_p;
    if (!(ne > 0.0 && nr > 0.0 && np > 0.0))
        throw std::domain_error("covariance_matrix: group sizes must be > 0");
    stat::Corr3 c;
    c.r12 = -1.0 / std::sqrt((1.0 + nr / ne) * (1.0 + nr / np));
    c.r13 = 1.0 / std::sqrt((1.0 + ne / nr) * (1.0 + ne / np));
    c.r23 = 1.0 / std::sqrt((1.0 + np / nr) * (1.0 + np / ne));
    return c;
}

namespace {

double power_impl(const DesignSpec& spec, const GroupSizes& sizes, double variance) {
    spec.validate();
    const double ne = sizes.n_e, nr = sizes.n_r, np = sizes.n_p;
    if (!(ne > 0.0 && nr > 0.0 && np > 0.0))
        throw std::domain_error("power: group sizes must be > 0");
    const double nu_er = ne + nr - 2.0;
    const double nu_rp = nr + np - 2.0;
    const double nu_ep = ne + np - 2.0;
    if (nu_er < 1.0 || nu_rp < 1.0 || nu_ep < 1.0)
        throw std::domain_error("power: every pairwise degrees of freedom must be >= 1");
    if (!(variance > 0.0)) throw std::domain_error("power: variance must be > 0");
    const double s = std::sqrt(variance);

    const double a1 = stat::t_quantile(spec.alpha, nu_er) -
                      ((spec.mu_e - spec.mu_r) - spec.delta_er) /
                          (s * std::sqrt(1.0 / ne + 1.0 / nr));
    const double a2 = stat::t_quantile(spec.alpha, nu_rp) -
                      ((spec.mu_r - spec.mu_p) + spec.delta_rp) /
                          (s * std::sqrt(1.0 / nr + 1.0 / np));
    const double a3 = stat::t_quantile(spec.alpha, nu_ep) -
                      ((spec.mu_e - spec.mu_p) + spec.delta_ep) /
                          (s * std::sqrt(1.0 / ne + 1.0 / np));
    return stat::mvn3_cdf(a1, a2, a3, covariance_matrix(sizes));
}

}  // namespace

double power(const DesignSpec& spec, const GroupSizes& sizes) {
    return power_impl(spec, sizes, spec.sigma * spec.sigma);
}

double power_at_total(const DesignSpec& spec, double n_total) {
    return power_at_total(spec, n_total, spec.sigma * spec.sigma);
}

double power_at_total(const DesignSpec& spec, double n_total, double variance) {
    const GroupSizes sizes{spec.alloc.w_e() * n_total, spec.alloc.w_r() * n_total,
                           spec.alloc.w_p() * n_total};
    return power_impl(spec, sizes, variance);
}

GroupSizes apportion(long total, const AllocationRatio& alloc, bool enforce_min) {
    alloc.validate();
    if (total < 0) throw std::domain_error("apportion: total must be >= 0");
    const double w[3] = {alloc.w_e(), alloc.w_r(), alloc.w_p()};
    long n[3];
    double rem[3];
    long assigned = 0;
    for (int k = 0; k < 3; ++k) {
        const double quota = w[k] * static_cast<double>(total);
        n[k] = static_cast<long>(std::floor(quota + 1e-9));
        rem[k] = quota - static_cast<double>(n[k]);
        assigned += n[k];
    }
    for (long seat = assigned; seat < total; ++seat) {
        int best = 0;
        for (int k = 1; k < 3; ++k)
            if (rem[k] > rem[best] + 1e-12) best = k;
        ++n[best];
        rem[best] -= 1.0;
    }
    if (enforce_min) {
        for (int k = 0; k < 3; ++k) {
            while (n[k] < 2) {
                int biggest = 0;
                for (int j = 1; j < 3; ++j)
                    if (n[j] > n[biggest]) biggest = j;
                if (biggest == k || n[biggest] <= 2)
                    throw std::domain_error("apportion: total too small for minimum group size 2");
                --n[biggest];
                ++n[k];
            }
        }
    }
    return GroupSizes{static_cast<double>(n[0]), static_cast<double>(n[1]),
                      static_cast<double>(n[2])};
}

long min_total(const AllocationRatio& alloc) {
    alloc.validate();
    const double w[3] = {alloc.w_e(), alloc.w_r(), alloc.w_p()};
    for (long n = 6;; ++n) {
        const bool dof_ok = n * (w[0] + w[1]) >= 3.0 && n * (w[1] + w[2]) >= 3.0 &&
                            n * (w[0] + w[2]) >= 3.0;
        if (!dof_ok) continue;
        const GroupSizes g = apportion(n, alloc, false);
        if (g.n_e >= 2.0 && g.n_r >= 2.0 && g.n_p >= 2.0) return n;
    }
}

long required_total(const DesignSpec& spec, double variance) {
    spec.validate();
    if (!spec.in_h1())
        throw std::domain_error(
            "required_sample_size: alternative outside H1, sample size is infinite");
    if (!(variance > 0.0)) throw std::domain_error("required_total: variance must be > 0");
    const double threshold = spec.target_power - kPowerTargetTolerance;
    const long n0 = min_total(spec.alloc);
    if (power_at_total(spec, static_cast<double>(n0), variance) >= threshold) return n0;
    long hi = n0;
    do {
        hi *= 2;
        if (hi > (1L << 40))
            throw std::runtime_error("required_total: search diverged");
    } while (power_at_total(spec, static_cast<double>(hi), variance) < threshold);
    long lo = hi / 2;
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (power_at_total(spec, static_cast<double>(mid), variance) >= threshold)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

SampleSizeResult required_sample_size(const DesignSpec& spec) {
    const long n = required_total(spec, spec.sigma * spec.sigma);
    return SampleSizeResult{n, apportion(n, spec.alloc, true)};
}

}  // namespace gsd
