#pragma once

#include <deque>
#include <unordered_map>
#include <vector>

#include "gsd/design.hpp"
#include "gsd/estimators.hpp"

namespace gsd {

/// How and when the sample size is re-estimated from the internal pilot.
struct ReestimationPolicy {
    EstimatorMethod method = EstimatorMethod::XingGanju;
    long n1 = 30;        // total pilot size
    int block_size = 3;  // XG only
    double zeta = 1.0;   // resizing factor applied to the re-estimated size

    void validate(const AllocationRatio& alloc) const;
};

/// Re-estimated sample size: the fixed-design search with sigma^2 replaced
/// by the blinded estimate. Monotone nondecreasing in the estimate.
long reestimate_sample_size(const DesignSpec& spec, const VarianceEstimate& estimate);

/// max(n1, ceil(zeta * n_reest)); no upper cap.
long final_sample_size(const ReestimationPolicy& policy, long n_reest);

/// The re-estimated total as a step function of the variance estimate,
/// tabulated once per design. n(x) is nondecreasing in x, so the function is
/// fully described by its breakpoints: xstar(n) is the variance at which the
/// required total steps past n, found by root finding the power equation in
/// the variance. The table depends only on the design (margins, means,
/// allocation, alpha, target), not on sigma, the pilot, or zeta, so one
/// table serves a whole scenario grid.
class SampleSizeCurve {
  public:
    explicit SampleSizeCurve(DesignSpec spec);

    /// Extend the table to cover [x_lo, x_hi]. Not thread-safe.
    void ensure(double x_lo, double x_hi);

    /// Re-estimated total at the given variance. Thread-safe after ensure();
    /// queries outside the covered range fall back to a direct search.
    long at(double variance) const;

    /// Breakpoints strictly inside (lo, hi), ascending. Call ensure() first.
    std::vector<double> breakpoints_between(double lo, double hi) const;

    const DesignSpec& spec() const { return spec_; }
    long floor_total() const { return floor_total_; }

  private:
    double xstar(long n, double guess_lo) const;

    DesignSpec spec_;
    long floor_total_ = 0;
    long first_n_ = 0;                // required total at covered_lo_
    std::deque<double> breakpoints_;  // breakpoints_[i]: largest x with n(x) <= first_n_ + i
    double covered_lo_ = 0.0;
    double covered_hi_ = 0.0;
    bool built_ = false;
};

/// Approximate power of the re-estimation design: the fixed-design power
/// composed with the estimator's sampling density,
///   integral of B(max(ceil(zeta n(x)), n1)) f(x) dx over (0, inf),
/// evaluated exactly on the step structure of n(x): the integral collapses
/// to a sum of B values weighted by CDF increments between breakpoints.
/// B is evaluated at the true sigma of `spec` with real-valued group sizes.
double expected_power(const DesignSpec& spec, const ReestimationPolicy& policy,
                      const EstimatorDensity& density);

/// Shared-table variant for scenario grids.
double expected_power(const DesignSpec& spec, const ReestimationPolicy& policy,
                      const EstimatorDensity& density, SampleSizeCurve& curve);

/// The resizing factor: the zeta solving expected_power = target_power for
/// the Xing-Ganju density at the spec's sigma. Solved by monotone root
/// finding on [0.5, 4] with automatic expansion to [0.1, 16]. Throws
/// std::domain_error when the pilot already reaches the fixed-design size.
double inflation_factor(const DesignSpec& spec, const ReestimationPolicy& policy);
double inflation_factor(const DesignSpec& spec, const ReestimationPolicy& policy,
                        SampleSizeCurve& curve);

/// Diagnostic scan of the factor over a sigma grid (the factor is flat in
/// sigma whenever the pilot is well below the fixed-design size; the scan
/// lets a user verify flatness before committing to a factor).
std::vector<std::pair<double, double>> zeta_sigma_scan(const DesignSpec& spec,
                                                       const ReestimationPolicy& policy,
                                                       const std::vector<double>& sigmas);

}  // namespace gsd
