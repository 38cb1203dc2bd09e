#include "gsd/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "gsd/chi_squared.hpp"

namespace gsd {

namespace {

double floored(double v) { return std::max(v, kVarianceFloor); }

}  // namespace

std::string method_name(EstimatorMethod m) {
    switch (m) {
        case EstimatorMethod::Pooled: return "pooled";
        case EstimatorMethod::OneSample: return "os";
        case EstimatorMethod::AdjustedOneSample: return "osu";
        case EstimatorMethod::XingGanju: return "xg";
    }
    throw std::logic_error("method_name: unknown method");
}

EstimatorMethod parse_method(const std::string& name) {
    if (name == "pooled") return EstimatorMethod::Pooled;
    if (name == "os") return EstimatorMethod::OneSample;
    if (name == "osu") return EstimatorMethod::AdjustedOneSample;
    if (name == "xg") return EstimatorMethod::XingGanju;
    throw std::invalid_argument("unknown estimator method '" + name +
                                "' (expected pooled, os, osu or xg)");
}

void TrialData::validate() const {
    if (has_labels() && static_cast<long>(labels.size()) != n1())
        throw std::invalid_argument("TrialData: label count does not match outcomes");
    if (has_blocks() && static_cast<long>(blocks.size()) != n1())
        throw std::invalid_argument("TrialData: block count does not match outcomes");
}

VarianceEstimate pooled_variance(const TrialData& data) {
    data.validate();
    if (!data.has_labels())
        throw std::invalid_argument("pooled_variance: group labels required (unblinded only)");
    const long n = data.n1();
    if (n <= 3) throw std::invalid_argument("pooled_variance: need n1 > 3");
    double sum[3] = {0, 0, 0};
    long cnt[3] = {0, 0, 0};
    for (long i = 0; i < n; ++i) {
        sum[static_cast<int>(data.labels[i])] += data.outcomes[i];
        ++cnt[static_cast<int>(data.labels[i])];
    }
    for (long c : cnt)
        if (c < 2) throw std::invalid_argument("pooled_variance: every group needs >= 2 subjects");
    double ss = 0.0;
    const double mean[3] = {sum[0] / cnt[0], sum[1] / cnt[1], sum[2] / cnt[2]};
    for (long i = 0; i < n; ++i) {
        const double d = data.outcomes[i] - mean[static_cast<int>(data.labels[i])];
        ss += d * d;
    }
    return {floored(ss / static_cast<double>(n - 3)), EstimatorMethod::Pooled, 0, 0};
}

VarianceEstimate one_sample_variance(const TrialData& data) {
    data.validate();
    const long n = data.n1();
    if (n < 2) throw std::invalid_argument("one_sample_variance: need n1 >= 2");
    const double mean = data.outcomes.mean();
    const double ss = (data.outcomes.array() - mean).square().sum();
    return {floored(ss / static_cast<double>(n - 1)), EstimatorMethod::OneSample, 0, 0};
}

double os_bias(double mu_e, double mu_r, double mu_p, double w1_e, double w1_r, double w1_p,
               long n1) {
    if (n1 < 2) throw std::domain_error("os_bias: need n1 >= 2");
    const double wsum = w1_e + w1_r + w1_p;
    if (!(wsum > 0.0) || std::fabs(wsum - 1.0) > 1e-9)
        throw std::domain_error("os_bias: pilot weights must sum to 1");
    const double lead = static_cast<double>(n1) / static_cast<double>(n1 - 1);
    const double d_pr = mu_p - mu_r;
    const double scale = std::max({std::fabs(mu_e), std::fabs(mu_r), std::fabs(mu_p), 1.0});
    if (std::fabs(d_pr) > 1e-12 * scale) {
        const double dstar = (mu_p - mu_e) / d_pr;
        const double inner = w1_e * dstar * dstar + w1_r -
                             (w1_e * dstar + w1_r) * (w1_e * dstar + w1_r);
        return lead * d_pr * d_pr * inner;
    }
    // mu_p == mu_r: the reparameterization is singular, use the equivalent
    // between-group variance form
    const double mu_bar = w1_e * mu_e + w1_r * mu_r + w1_p * mu_p;
    const double v = w1_e * (mu_e - mu_bar) * (mu_e - mu_bar) +
                     w1_r * (mu_r - mu_bar) * (mu_r - mu_bar) +
                     w1_p * (mu_p - mu_bar) * (mu_p - mu_bar);
    return lead * v;
}

VarianceEstimate adjusted_one_sample(const TrialData& data, double mu_e, double mu_r,
                                     double mu_p, double w1_e, double w1_r, double w1_p) {
    const VarianceEstimate os = one_sample_variance(data);
    const double bias = os_bias(mu_e, mu_r, mu_p, w1_e, w1_r, w1_p, data.n1());
    return {floored(os.value - bias), EstimatorMethod::AdjustedOneSample, 0, 0};
}

VarianceEstimate xing_ganju(const TrialData& data) {
    data.validate();
    if (!data.has_blocks())
        throw std::invalid_argument("xing_ganju: block assignments required");
    const long n = data.n1();
    std::map<int, std::pair<double, long>> blocks;  // block -> (sum, count)
    for (long i = 0; i < n; ++i) {
        auto& [sum, cnt] = blocks[data.blocks[i]];
        sum += data.outcomes[i];
        ++cnt;
    }
    const long b = static_cast<long>(blocks.size());
    if (b < 2) throw std::invalid_argument("xing_ganju: need at least 2 blocks");
    const long m = blocks.begin()->second.second;
    for (const auto& [id, sc] : blocks)
        if (sc.second != m)
            throw std::invalid_argument("xing_ganju: blocks must be complete and of equal size");
    if (n != b * m) throw std::logic_error("xing_ganju: inconsistent block structure");
    double tbar = 0.0;
    for (const auto& [id, sc] : blocks) tbar += sc.first;
    tbar /= static_cast<double>(b);
    double ss = 0.0;
    for (const auto& [id, sc] : blocks) ss += (sc.first - tbar) * (sc.first - tbar);
    return {floored(ss / static_cast<double>(n - m)), EstimatorMethod::XingGanju,
            static_cast<int>(m), static_cast<int>(b)};
}

double EstimatorDensity::pdf(double x) const {
    if (x < 0.0) throw std::domain_error("EstimatorDensity: x must be >= 0");
    return stat::chisq_noncentral_pdf(x / scale, df, lambda) / scale;
}

double EstimatorDensity::cdf(double x) const {
    if (x < 0.0) return 0.0;
    return stat::chisq_noncentral_cdf(x / scale, df, lambda);
}

double EstimatorDensity::quantile(double p) const {
    return scale * stat::chisq_noncentral_quantile(p, df, lambda);
}

EstimatorDensity density_os(double sigma2, long n1, double mu_e, double mu_r, double mu_p,
                            double w1_e, double w1_r, double w1_p) {
    if (!(sigma2 > 0.0)) throw std::domain_error("density_os: sigma2 must be > 0");
    if (n1 < 2) throw std::domain_error("density_os: need n1 >= 2");
    const double mu_bar = w1_e * mu_e + w1_r * mu_r + w1_p * mu_p;
    const double between = w1_e * (mu_e - mu_bar) * (mu_e - mu_bar) +
                           w1_r * (mu_r - mu_bar) * (mu_r - mu_bar) +
                           w1_p * (mu_p - mu_bar) * (mu_p - mu_bar);
    const double lambda = static_cast<double>(n1) * between / sigma2;
    const double df = static_cast<double>(n1 - 1);
    return {sigma2 / df, df, lambda};
}

EstimatorDensity density_xg(double sigma2, long n1, int block_size) {
    if (!(sigma2 > 0.0)) throw std::domain_error("density_xg: sigma2 must be > 0");
    if (block_size < 2) throw std::domain_error("density_xg: block size must be >= 2");
    if (n1 % block_size != 0)
        throw std::domain_error("density_xg: n1 must be a multiple of the block size");
    const long b = n1 / block_size;
    if (b < 2) throw std::domain_error("density_xg: need at least 2 blocks");
    return {static_cast<double>(block_size) * sigma2 / static_cast<double>(n1 - block_size),
            static_cast<double>(b - 1), 0.0};
}

EstimatorDensity density_pooled(double sigma2, long n1) {
    if (!(sigma2 > 0.0)) throw std::domain_error("density_pooled: sigma2 must be > 0");
    if (n1 < 4) throw std::domain_error("density_pooled: need n1 > 3");
    const double df = static_cast<double>(n1 - 3);
    return {sigma2 / df, df, 0.0};
}

}  // namespace gsd
