#pragma once

#include <string>

#include "gsd/trivariate_normal.hpp"

namespace gsd {

/// Integer allocation ratio n_E : n_R : n_P.
struct AllocationRatio {
    int r_e = 1;
    int r_r = 1;
    int r_p = 1;

    void validate() const;
    int sum() const { return r_e + r_r + r_p; }
    double w_e() const { return static_cast<double>(r_e) / sum(); }
    double w_r() const { return static_cast<double>(r_r) / sum(); }
    double w_p() const { return static_cast<double>(r_p) / sum(); }

    static AllocationRatio parse(const std::string& text);  // "3:2:1"
    std::string str() const;
    bool operator==(const AllocationRatio&) const = default;
};

/// Per-group sample sizes. Real-valued during the sample size search,
/// integer once realized.
struct GroupSizes {
    double n_e = 0.0;
    double n_r = 0.0;
    double n_p = 0.0;
    double total() const { return n_e + n_r + n_p; }
};

/// Margins, planning alternative, nuisance parameter and error rates:
/// everything the power function and the sample size search consume.
/// Outcomes are oriented so that smaller means are better; mu_p therefore
/// sits above mu_e and mu_r under the alternative.
struct DesignSpec {
    double delta_er = 0.3;  // non-inferiority margin, > 0
    double delta_ep = 0.0;  // superiority margins, >= 0
    double delta_rp = 0.0;
    double mu_e = 0.0;
    double mu_r = 0.0;
    double mu_p = 0.6;
    double sigma = 1.0;
    AllocationRatio alloc;
    double alpha = 0.025;        // one-sided
    double target_power = 0.8;

    void validate() const;
    /// True when the alternative lies strictly inside H1.
    bool in_h1() const;
    DesignSpec with_sigma(double s) const;
};

/// Correlations of the three pairwise contrast statistics (ER, RP, EP) for
/// the given group sizes. The matrix depends only on size ratios, is always
/// exactly singular (the third contrast is the sum of the other two), and
/// satisfies r12 < 0 < r13, r23.
stat::Corr3 covariance_matrix(const GroupSizes& sizes);

/// Approximate power of the intersection-union test at the given group
/// sizes: the trivariate normal CDF evaluated at the three shifted
/// t-quantile arguments, with nu_ij = n_i + n_j - 2.
double power(const DesignSpec& spec, const GroupSizes& sizes);

/// Power at a real-valued total with group sizes w_k * n.
double power_at_total(const DesignSpec& spec, double n_total);
double power_at_total(const DesignSpec& spec, double n_total, double variance);

/// Largest-remainder apportionment of a total over the allocation ratio.
/// Ties in the remainders break toward E, then R, then P. When enforce_min
/// is set, every group is bumped to at least 2 (taking from the largest).
GroupSizes apportion(long total, const AllocationRatio& alloc, bool enforce_min = true);

/// Smallest total for which the power function is defined (all pairwise
/// degrees of freedom >= 1) and the realized groups each hold >= 2 subjects.
long min_total(const AllocationRatio& alloc);

struct SampleSizeResult {
    long total = 0;
    GroupSizes realized;
};

/// Smallest integer total whose power reaches the target. The search
/// evaluates the power with real-valued group sizes w_k * n and compares
/// against target_power - kPowerTargetTolerance; the margin absorbs
/// quadrature-level differences so that results agree with references
/// computed by randomized quasi-Monte-Carlo integrators at their default
/// accuracy. Throws std::domain_error when the alternative is outside H1.
SampleSizeResult required_sample_size(const DesignSpec& spec);

/// Same search with the variance sigma^2 replaced by `variance`.
long required_total(const DesignSpec& spec, double variance);

inline constexpr double kPowerTargetTolerance = 1e-3;

}  // namespace gsd
