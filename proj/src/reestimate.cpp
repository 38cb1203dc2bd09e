#include "gsd/reestimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gsd/roots.hpp"

namespace gsd {

namespace {

long ceil_scaled(double zeta, long n) {
    // ceil(zeta*n) with a guard against 530.0000000001-type representation noise
    return static_cast<long>(std::ceil(zeta * static_cast<double>(n) - 1e-9));
}

}  // namespace

void ReestimationPolicy::validate(const AllocationRatio& alloc) const {
    if (n1 < 6) throw std::domain_error("ReestimationPolicy: pilot size must be >= 6");
    if (!(zeta > 0.0)) throw std::domain_error("ReestimationPolicy: zeta must be > 0");
    const GroupSizes pilot = apportion(n1, alloc, false);
    if (pilot.n_e < 2 || pilot.n_r < 2 || pilot.n_p < 2)
        throw std::domain_error("ReestimationPolicy: every pilot group needs >= 2 subjects");
    if (method == EstimatorMethod::XingGanju) {
        if (block_size < 2)
            throw std::domain_error("ReestimationPolicy: XG needs a block size >= 2");
        if (n1 % block_size != 0)
            throw std::domain_error("ReestimationPolicy: XG needs n1 divisible by the block size");
    }
}

long reestimate_sample_size(const DesignSpec& spec, const VarianceEstimate& estimate) {
    if (!(estimate.value > 0.0))
        throw std::domain_error("reestimate_sample_size: estimate must be > 0");
    return required_total(spec, estimate.value);
}

long final_sample_size(const ReestimationPolicy& policy, long n_reest) {
    if (n_reest < 0) throw std::domain_error("final_sample_size: n_reest must be >= 0");
    return std::max(policy.n1, ceil_scaled(policy.zeta, n_reest));
}

SampleSizeCurve::SampleSizeCurve(DesignSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    if (!spec_.in_h1())
        throw std::domain_error("SampleSizeCurve: alternative outside H1");
    floor_total_ = min_total(spec_.alloc);
}

double SampleSizeCurve::xstar(long n, double guess_lo) const {
    // largest variance at which a total of n still meets the target:
    // power is strictly decreasing in the variance
    const double threshold = spec_.target_power - kPowerTargetTolerance;
    auto g = [&](double x) {
        return power_at_total(spec_, static_cast<double>(n), x) - threshold;
    };
    double lo = std::max(guess_lo, 1e-12);
    double hi = lo * (1.0 + 6.0 / static_cast<double>(std::max(n, 8L))) + 1e-9;
    int guard = 0;
    while (g(hi) > 0.0) {
        hi *= 1.5;
        if (++guard > 200) throw std::runtime_error("SampleSizeCurve: bracketing failed");
    }
    while (g(lo) < 0.0) {
        lo *= 0.6;
        if (++guard > 400) throw std::runtime_error("SampleSizeCurve: bracketing failed");
    }
    stat::RootOptions opt;
    opt.tol = 1e-11 * std::max(1.0, hi);
    opt.expand_bracket = false;
    return stat::find_root(g, lo, hi, opt);
}

void SampleSizeCurve::ensure(double x_lo, double x_hi) {
    x_lo = std::max(x_lo, 1e-12);
    x_hi = std::max(x_hi, x_lo);
    if (built_ && covered_lo_ <= x_lo && covered_hi_ >= x_hi) return;
    if (!built_) {
        covered_lo_ = x_lo;
        covered_hi_ = x_lo;
        first_n_ = required_total(spec_, x_lo);
        built_ = true;
    }
    if (x_lo < covered_lo_) {
        // extend downward: prepend breakpoints until the new low end is covered
        long n_new = required_total(spec_, x_lo);
        std::vector<double> prefix;
        double guess = x_lo;
        for (long n = n_new; n < first_n_; ++n) {
            const double x = xstar(n, guess);
            prefix.push_back(x);
            guess = x;
        }
        breakpoints_.insert(breakpoints_.begin(), prefix.begin(), prefix.end());
        first_n_ = n_new;
        covered_lo_ = x_lo;
    }
    if (x_hi > covered_hi_) {
        const long n_end = required_total(spec_, x_hi);
        long n_next = first_n_ + static_cast<long>(breakpoints_.size());
        double guess = breakpoints_.empty() ? covered_lo_ : breakpoints_.back();
        for (long n = n_next; n < n_end; ++n) {
            const double x = xstar(n, guess);
            breakpoints_.push_back(x);
            guess = x;
        }
        covered_hi_ = x_hi;
    }
}

long SampleSizeCurve::at(double variance) const {
    if (!(variance > 0.0)) throw std::domain_error("SampleSizeCurve: variance must be > 0");
    if (!built_ || variance < covered_lo_ || variance > covered_hi_)
        return required_total(spec_, variance);
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), variance);
    return first_n_ + static_cast<long>(it - breakpoints_.begin());
}

std::vector<double> SampleSizeCurve::breakpoints_between(double lo, double hi) const {
    std::vector<double> out;
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), lo);
    for (; it != breakpoints_.end() && *it < hi; ++it) out.push_back(*it);
    return out;
}

double expected_power(const DesignSpec& spec, const ReestimationPolicy& policy,
                      const EstimatorDensity& density) {
    SampleSizeCurve curve(spec);
    return expected_power(spec, policy, density, curve);
}

double expected_power(const DesignSpec& spec, const ReestimationPolicy& policy,
                      const EstimatorDensity& density, SampleSizeCurve& curve) {
    spec.validate();
    policy.validate(spec.alloc);
    const double sigma2 = spec.sigma * spec.sigma;
    const double x_lo = density.quantile(1e-9);
    const double x_hi = density.quantile(1.0 - 1e-9);
    curve.ensure(x_lo, x_hi);

    std::unordered_map<long, double> b_memo;
    auto b_at = [&](long total) {
        auto it = b_memo.find(total);
        if (it != b_memo.end()) return it->second;
        const double v = power_at_total(spec, static_cast<double>(total), sigma2);
        b_memo.emplace(total, v);
        return v;
    };
    auto final_total = [&](long n_reest) {
        return std::max(policy.n1, ceil_scaled(policy.zeta, n_reest));
    };

    // the integrand is a step function of the estimate, so the integral is a
    // sum of fixed-design powers weighted by CDF increments between steps
    const std::vector<double> cuts = curve.breakpoints_between(x_lo, x_hi);
    long n = curve.at(x_lo);
    double total = density.cdf(x_lo) * b_at(final_total(n));  // mass below truncation
    double f_prev = density.cdf(x_lo);
    for (double cut : cuts) {
        const double f_cut = density.cdf(cut);
        total += (f_cut - f_prev) * b_at(final_total(n));
        f_prev = f_cut;
        ++n;
    }
    total += (density.cdf(x_hi) - f_prev) * b_at(final_total(n));
    total += (1.0 - density.cdf(x_hi)) * b_at(final_total(n));  // mass above truncation
    return std::clamp(total, 0.0, 1.0);
}

double inflation_factor(const DesignSpec& spec, const ReestimationPolicy& policy) {
    SampleSizeCurve curve(spec);
    return inflation_factor(spec, policy, curve);
}

double inflation_factor(const DesignSpec& spec, const ReestimationPolicy& policy,
                        SampleSizeCurve& curve) {
    spec.validate();
    if (policy.method != EstimatorMethod::XingGanju)
        throw std::domain_error(
            "inflation_factor: only the Xing-Ganju estimator has a mean-free density, the "
            "factor for other estimators cannot be fixed before the pilot");
    policy.validate(spec.alloc);
    const long fixed = required_total(spec, spec.sigma * spec.sigma);
    if (policy.n1 >= fixed)
        throw std::domain_error(
            "inflation_factor: factor undefined, the pilot study already reaches the "
            "fixed-design sample size");
    const EstimatorDensity density =
        density_xg(spec.sigma * spec.sigma, policy.n1, policy.block_size);
    auto g = [&](double zeta) {
        ReestimationPolicy p = policy;
        p.zeta = zeta;
        return expected_power(spec, p, density, curve) - spec.target_power;
    };
    stat::RootOptions opt;
    opt.tol = 1e-6;
    opt.expand_bracket = true;
    opt.expand_limit = 16.0;  // [0.5, 4] widens at most to about [0.1, 16]
    return stat::find_root(g, 0.5, 4.0, opt);
}

std::vector<std::pair<double, double>> zeta_sigma_scan(const DesignSpec& spec,
                                                       const ReestimationPolicy& policy,
                                                       const std::vector<double>& sigmas) {
    SampleSizeCurve curve(spec);
    std::vector<std::pair<double, double>> out;
    out.reserve(sigmas.size());
    for (double s : sigmas)
        out.emplace_back(s, inflation_factor(spec.with_sigma(s), policy, curve));
    return out;
}

}  // namespace gsd
