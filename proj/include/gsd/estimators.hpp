#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gsd/design.hpp"

namespace gsd {

enum class Group : unsigned char { E = 0, R = 1, P = 2 };

enum class EstimatorMethod { Pooled, OneSample, AdjustedOneSample, XingGanju };

std::string method_name(EstimatorMethod m);
EstimatorMethod parse_method(const std::string& name);

/// Outcomes of an internal pilot (or any) sample. Labels and block indices
/// are optional: blinded estimators ignore labels, the Xing-Ganju estimator
/// needs only block membership, the pooled estimator needs labels.
struct TrialData {
    Eigen::VectorXd outcomes;
    std::vector<Group> labels;   // empty when blinded
    std::vector<int> blocks;     // empty when not block-randomized

    long n1() const { return outcomes.size(); }
    bool has_labels() const { return !labels.empty(); }
    bool has_blocks() const { return !blocks.empty(); }
    void validate() const;
};

/// Estimates below this floor are clamped so that downstream re-estimation
/// degenerates to the minimum sample size instead of failing.
inline constexpr double kVarianceFloor = 1e-12;

struct VarianceEstimate {
    double value = 0.0;
    EstimatorMethod method = EstimatorMethod::OneSample;
    int block_size = 0;   // XG only
    int block_count = 0;  // XG only
};

/// Unblinded pooled within-group variance, (sum_k (n_k-1) s_k^2) / (n1 - 3).
VarianceEstimate pooled_variance(const TrialData& data);

/// Blinded one-sample variance of the pooled outcomes.
VarianceEstimate one_sample_variance(const TrialData& data);

/// Expected excess of the one-sample estimator over sigma^2 under the given
/// means: (n1/(n1-1)) * Delta_PR^2 * (w_E D*^2 + w_R - (w_E D* + w_R)^2) with
/// D* = (mu_p - mu_e)/(mu_p - mu_r). When mu_p == mu_r the equivalent
/// between-group form (n1/(n1-1)) * sum_k w_k (mu_k - mu_bar)^2 is used,
/// which has no singularity. The leading factor is the pilot size n1; this
/// matches the estimator's sampling distribution (see density_os).
double os_bias(double mu_e, double mu_r, double mu_p, double w1_e, double w1_r, double w1_p,
               long n1);

/// One-sample estimate minus the bias under the assumed (planning) means,
/// floored at kVarianceFloor.
VarianceEstimate adjusted_one_sample(const TrialData& data, double mu_e, double mu_r,
                                     double mu_p, double w1_e, double w1_r, double w1_p);

/// Xing-Ganju block-sum estimator, (1/(n1-m)) sum_k (T_k - T_bar)^2.
/// Requires complete blocks of one uniform size; labels are not used.
VarianceEstimate xing_ganju(const TrialData& data);

/// Sampling density of a blinded variance estimator: scale * Chi2(df, lambda).
struct EstimatorDensity {
    double scale = 1.0;
    double df = 1.0;
    double lambda = 0.0;  // 0 for the central family

    double pdf(double x) const;
    double cdf(double x) const;
    double quantile(double p) const;
    double mean() const { return scale * (df + lambda); }
    double variance() const { return scale * scale * 2.0 * (df + 2.0 * lambda); }
};

/// Density of the one-sample estimator: (sigma^2/(n1-1)) Chi2_{n1-1}(lambda)
/// with lambda = sum_k n_{1,k} (mu_k - mu_bar)^2 / sigma^2.
EstimatorDensity density_os(double sigma2, long n1, double mu_e, double mu_r, double mu_p,
                            double w1_e, double w1_r, double w1_p);

/// Density of the Xing-Ganju estimator: (m sigma^2/(n1-m)) Chi2_{b-1}.
EstimatorDensity density_xg(double sigma2, long n1, int block_size);

/// Density of the unblinded pooled estimator: (sigma^2/(n1-3)) Chi2_{n1-3}.
EstimatorDensity density_pooled(double sigma2, long n1);

}  // namespace gsd
