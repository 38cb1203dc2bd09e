#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "gsd/estimators.hpp"
#include "gsd/reestimate.hpp"
#include "gsd/rng.hpp"

namespace gsd {

/// Fixed per-block group composition for permuted-block randomization;
/// proportional to the allocation ratio (blocks of 3 for 1:1:1, 6 for 3:2:1).
struct BlockComposition {
    int m_e = 1;
    int m_r = 1;
    int m_p = 1;
    int size() const { return m_e + m_r + m_p; }
    static BlockComposition for_alloc(const AllocationRatio& alloc) {
        return {alloc.r_e, alloc.r_r, alloc.r_p};
    }
};

/// One Monte Carlo scenario: the planning design, the re-estimation policy,
/// and the data-generating truth (which sits on a null boundary in type I
/// error runs and equals the planning alternative in power runs).
struct ScenarioConfig {
    DesignSpec spec;
    ReestimationPolicy policy;
    std::array<double, 3> truth_means{0.0, 0.0, 0.6};  // E, R, P
    double truth_sigma = 1.0;
    long replications = 15000;
    std::uint64_t master_seed = 1;
    std::string scenario_id;
    /// When set, re-estimation is disabled and every replication runs the
    /// fixed design of this total size.
    std::optional<long> fixed_total;

    void validate() const;
};

struct SimulationReport {
    std::string scenario_id;
    long replications = 0;
    double reject_er = 0.0;
    double reject_rp = 0.0;
    double reject_ep = 0.0;
    double reject_global = 0.0;
    long n_final_median = 0;
    long n_final_q1 = 0;
    long n_final_q3 = 0;
    double n_final_mean = 0.0;
    double mean_estimate = 0.0;  // average blinded variance estimate (0 in fixed runs)

    double mc_error(double rate) const {
        return std::sqrt(rate * (1.0 - rate) / static_cast<double>(replications));
    }
    double mc_error_global() const { return mc_error(reject_global); }
};

/// Normal outcomes arranged in permuted blocks of the given composition.
/// Complete blocks are drawn while every group still needs at least its
/// block share; the remainder is filled with one truncated permuted block
/// per depleted pattern. Labels and block indices are recorded.
TrialData generate_trial(const std::array<double, 3>& means, double sigma,
                         long n_e, long n_r, long n_p, const BlockComposition& comp,
                         Rng& rng, int first_block_index = 0);

struct IutResult {
    bool reject_er = false;
    bool reject_rp = false;
    bool reject_ep = false;
    bool reject_global = false;
    double p_er = 1.0;
    double p_rp = 1.0;
    double p_ep = 1.0;
};

/// The three pairwise one-sided two-sample t-tests at level alpha, each
/// pooling only its own two groups (nu = n_i + n_j - 2), combined by the
/// intersection-union rule.
IutResult iut_test(const TrialData& data, const DesignSpec& spec);

struct TrialOutcome {
    long n_final = 0;
    IutResult test;
    double estimate = 0.0;
};

/// One adaptive replication: pilot, blinded estimate, re-estimated and
/// floored final size, second stage, final analysis of all data.
/// Deterministic given (master seed, scenario id, replication index).
TrialOutcome run_adaptive_trial(const ScenarioConfig& config, const SampleSizeCurve& curve,
                                long rep_index);

/// Run all replications of a scenario on the given number of workers.
/// Counters are integers merged after the fact, so the report is identical
/// for any worker count. A shared curve avoids rebuilding the re-estimation
/// table across scenarios with the same design; it is extended (single
/// threaded) before workers start and only read afterwards.
SimulationReport run_scenario(const ScenarioConfig& config, int workers = 1,
                              SampleSizeCurve* shared_curve = nullptr);

/// Wrappers that check the truth placement expected by each study type.
SimulationReport simulate_power(const ScenarioConfig& config, int workers = 1,
                                SampleSizeCurve* shared_curve = nullptr);
enum class NullBoundary { ER, EP, RP };
SimulationReport simulate_type1(const ScenarioConfig& config, NullBoundary target,
                                int workers = 1, SampleSizeCurve* shared_curve = nullptr);

}  // namespace gsd
