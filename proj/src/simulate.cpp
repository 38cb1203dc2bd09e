#include "gsd/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gsd/student_t.hpp"

namespace gsd {

void ScenarioConfig::validate() const {
    spec.validate();
    if (replications < 1) throw std::domain_error("ScenarioConfig: replications must be >= 1");
    if (!(truth_sigma > 0.0)) throw std::domain_error("ScenarioConfig: truth sigma must be > 0");
    if (scenario_id.empty()) throw std::domain_error("ScenarioConfig: scenario id required");
    if (fixed_total) {
        if (*fixed_total < min_total(spec.alloc))
            throw std::domain_error("ScenarioConfig: fixed total below the minimum size");
    } else {
        policy.validate(spec.alloc);
    }
}

TrialData generate_trial(const std::array<double, 3>& means, double sigma,
                         long n_e, long n_r, long n_p, const BlockComposition& comp,
                         Rng& rng, int first_block_index) {
    if (n_e < 0 || n_r < 0 || n_p < 0)
        throw std::domain_error("generate_trial: group sizes must be >= 0");
    if (comp.m_e < 0 || comp.m_r < 0 || comp.m_p < 0 || comp.size() < 1)
        throw std::domain_error("generate_trial: invalid block composition");
    const long total = n_e + n_r + n_p;
    TrialData data;
    data.outcomes.resize(total);
    data.labels.reserve(total);
    data.blocks.reserve(total);

    long remaining[3] = {n_e, n_r, n_p};
    const int comp_k[3] = {comp.m_e, comp.m_r, comp.m_p};
    std::vector<Group> block_labels;
    long written = 0;
    int block = first_block_index;
    while (remaining[0] + remaining[1] + remaining[2] > 0) {
        block_labels.clear();
        for (int k = 0; k < 3; ++k) {
            const long take = std::min<long>(comp_k[k], remaining[k]);
            for (long i = 0; i < take; ++i) block_labels.push_back(static_cast<Group>(k));
            remaining[k] -= take;
        }
        if (block_labels.empty()) {
            // composition has zeros where subjects remain; flush one per group
            for (int k = 0; k < 3; ++k)
                if (remaining[k] > 0) {
                    block_labels.push_back(static_cast<Group>(k));
                    --remaining[k];
                }
        }
        rng.shuffle(block_labels.begin(), block_labels.end());
        for (Group g : block_labels) {
            data.outcomes[written] = means[static_cast<int>(g)] + sigma * rng.normal();
            data.labels.push_back(g);
            data.blocks.push_back(block);
            ++written;
        }
        ++block;
    }
    return data;
}

IutResult iut_test(const TrialData& data, const DesignSpec& spec) {
    data.validate();
    if (!data.has_labels()) throw std::invalid_argument("iut_test: group labels required");
    const long n = data.n1();
    double sum[3] = {0, 0, 0};
    double sumsq[3] = {0, 0, 0};
    long cnt[3] = {0, 0, 0};
    for (long i = 0; i < n; ++i) {
        const int k = static_cast<int>(data.labels[i]);
        sum[k] += data.outcomes[i];
        sumsq[k] += data.outcomes[i] * data.outcomes[i];
        ++cnt[k];
    }
    for (long c : cnt)
        if (c < 2) throw std::invalid_argument("iut_test: every group needs >= 2 subjects");
    double mean[3], ss[3];
    for (int k = 0; k < 3; ++k) {
        mean[k] = sum[k] / static_cast<double>(cnt[k]);
        ss[k] = sumsq[k] - sum[k] * sum[k] / static_cast<double>(cnt[k]);
        if (ss[k] < 0.0) ss[k] = 0.0;
    }
    constexpr int E = 0, R = 1, P = 2;
    auto one_sided = [&](int i, int j, double shift) {
        const double nu = static_cast<double>(cnt[i] + cnt[j] - 2);
        const double pooled = (ss[i] + ss[j]) / nu;
        const double se = std::sqrt(pooled * (1.0 / cnt[i] + 1.0 / cnt[j]));
        const double t = (mean[i] - mean[j] + shift) / se;
        return stat::t_cdf(t, nu);
    };
    IutResult out;
    out.p_er = one_sided(E, R, -spec.delta_er);
    out.p_rp = one_sided(R, P, spec.delta_rp);
    out.p_ep = one_sided(E, P, spec.delta_ep);
    out.reject_er = out.p_er < spec.alpha;
    out.reject_rp = out.p_rp < spec.alpha;
    out.reject_ep = out.p_ep < spec.alpha;
    out.reject_global = out.reject_er && out.reject_rp && out.reject_ep;
    return out;
}

namespace {

TrialData concat(TrialData a, const TrialData& b) {
    const long na = a.n1(), nb = b.n1();
    Eigen::VectorXd merged(na + nb);
    merged << a.outcomes, b.outcomes;
    a.outcomes = std::move(merged);
    a.labels.insert(a.labels.end(), b.labels.begin(), b.labels.end());
    a.blocks.insert(a.blocks.end(), b.blocks.begin(), b.blocks.end());
    return a;
}

VarianceEstimate estimate_for(const ScenarioConfig& cfg, const TrialData& pilot,
                              const GroupSizes& pilot_sizes) {
    const double n1 = static_cast<double>(cfg.policy.n1);
    switch (cfg.policy.method) {
        case EstimatorMethod::Pooled:
            return pooled_variance(pilot);
        case EstimatorMethod::OneSample:
            return one_sample_variance(pilot);
        case EstimatorMethod::AdjustedOneSample:
            // bias always under the planning alternative, never data-derived means
            return adjusted_one_sample(pilot, cfg.spec.mu_e, cfg.spec.mu_r, cfg.spec.mu_p,
                                       pilot_sizes.n_e / n1, pilot_sizes.n_r / n1,
                                       pilot_sizes.n_p / n1);
        case EstimatorMethod::XingGanju:
            return xing_ganju(pilot);
    }
    throw std::logic_error("estimate_for: unknown method");
}

struct Accumulator {
    std::uint64_t er = 0, rp = 0, ep = 0, global = 0;
    std::map<long, std::uint64_t> n_final_hist;
    std::uint64_t n_final_sum = 0;
    double estimate_sum = 0.0;

    void merge(const Accumulator& other) {
        er += other.er;
        rp += other.rp;
        ep += other.ep;
        global += other.global;
        for (const auto& [n, c] : other.n_final_hist) n_final_hist[n] += c;
        n_final_sum += other.n_final_sum;
        estimate_sum += other.estimate_sum;
    }
};

long histogram_quantile(const std::map<long, std::uint64_t>& hist, std::uint64_t reps,
                        double p) {
    // type-1 quantile: smallest value whose cumulative count reaches ceil(p*reps)
    const auto want = static_cast<std::uint64_t>(
        std::ceil(p * static_cast<double>(reps) - 1e-9));
    std::uint64_t cum = 0;
    for (const auto& [n, c] : hist) {
        cum += c;
        if (cum >= want) return n;
    }
    return hist.empty() ? 0 : hist.rbegin()->first;
}

}  // namespace

TrialOutcome run_adaptive_trial(const ScenarioConfig& cfg, const SampleSizeCurve& curve,
                                long rep_index) {
    Rng rng = Rng::replication(cfg.master_seed, cfg.scenario_id,
                               static_cast<std::uint64_t>(rep_index));
    const BlockComposition comp = BlockComposition::for_alloc(cfg.spec.alloc);

    if (cfg.fixed_total) {
        const GroupSizes sizes = apportion(*cfg.fixed_total, cfg.spec.alloc, true);
        const TrialData data =
            generate_trial(cfg.truth_means, cfg.truth_sigma, static_cast<long>(sizes.n_e),
                           static_cast<long>(sizes.n_r), static_cast<long>(sizes.n_p), comp, rng);
        return {*cfg.fixed_total, iut_test(data, cfg.spec), 0.0};
    }

    const GroupSizes pilot_sizes = apportion(cfg.policy.n1, cfg.spec.alloc, false);
    if (cfg.policy.method == EstimatorMethod::XingGanju) {
        const long blocks = cfg.policy.n1 / cfg.policy.block_size;
        if (comp.size() != cfg.policy.block_size ||
            static_cast<long>(pilot_sizes.n_e) != blocks * comp.m_e ||
            static_cast<long>(pilot_sizes.n_r) != blocks * comp.m_r ||
            static_cast<long>(pilot_sizes.n_p) != blocks * comp.m_p)
            throw std::domain_error("run_adaptive_trial: pilot not block-compatible for XG");
    }
    TrialData pilot = generate_trial(cfg.truth_means, cfg.truth_sigma,
                                     static_cast<long>(pilot_sizes.n_e),
                                     static_cast<long>(pilot_sizes.n_r),
                                     static_cast<long>(pilot_sizes.n_p), comp, rng);
    const VarianceEstimate est = estimate_for(cfg, pilot, pilot_sizes);
    const long n_reest = curve.at(est.value);
    const long n_final = final_sample_size(cfg.policy, n_reest);

    TrialData all = std::move(pilot);
    if (n_final > cfg.policy.n1) {
        const GroupSizes second = apportion(n_final - cfg.policy.n1, cfg.spec.alloc, false);
        const int next_block = all.blocks.empty() ? 0 : all.blocks.back() + 1;
        const TrialData stage2 = generate_trial(
            cfg.truth_means, cfg.truth_sigma, static_cast<long>(second.n_e),
            static_cast<long>(second.n_r), static_cast<long>(second.n_p), comp, rng,
            next_block);
        all = concat(std::move(all), stage2);
    }
    return {n_final, iut_test(all, cfg.spec), est.value};
}

SimulationReport run_scenario(const ScenarioConfig& cfg, int workers,
                              SampleSizeCurve* shared_curve) {
    cfg.validate();
    if (workers < 1) workers = 1;

    // pre-build the re-estimation table over the plausible estimate range so
    // worker threads only ever read it
    SampleSizeCurve own_curve(cfg.spec);
    SampleSizeCurve& curve = shared_curve ? *shared_curve : own_curve;
    if (!cfg.fixed_total) {
        const double s2 = cfg.truth_sigma * cfg.truth_sigma;
        EstimatorDensity density{};
        const GroupSizes pilot = apportion(cfg.policy.n1, cfg.spec.alloc, false);
        const double n1 = static_cast<double>(cfg.policy.n1);
        switch (cfg.policy.method) {
            case EstimatorMethod::Pooled:
                density = density_pooled(s2, cfg.policy.n1);
                break;
            case EstimatorMethod::OneSample:
            case EstimatorMethod::AdjustedOneSample:
                density = density_os(s2, cfg.policy.n1, cfg.truth_means[0], cfg.truth_means[1],
                                     cfg.truth_means[2], pilot.n_e / n1, pilot.n_r / n1,
                                     pilot.n_p / n1);
                break;
            case EstimatorMethod::XingGanju:
                density = density_xg(s2, cfg.policy.n1, cfg.policy.block_size);
                break;
        }
        curve.ensure(0.5 * density.quantile(1e-7), 1.5 * density.quantile(1.0 - 1e-7));
    }

    std::vector<Accumulator> accs(workers);
    std::atomic<long> next{0};
    auto work = [&](int w) {
        Accumulator& acc = accs[w];
        for (;;) {
            const long start = next.fetch_add(256);
            if (start >= cfg.replications) break;
            const long end = std::min(cfg.replications, start + 256);
            for (long rep = start; rep < end; ++rep) {
                const TrialOutcome out = run_adaptive_trial(cfg, curve, rep);
                acc.er += out.test.reject_er;
                acc.rp += out.test.reject_rp;
                acc.ep += out.test.reject_ep;
                acc.global += out.test.reject_global;
                ++acc.n_final_hist[out.n_final];
                acc.n_final_sum += static_cast<std::uint64_t>(out.n_final);
                acc.estimate_sum += out.estimate;
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    Accumulator total;
    for (const Accumulator& acc : accs) total.merge(acc);

    SimulationReport rep;
    rep.scenario_id = cfg.scenario_id;
    rep.replications = cfg.replications;
    const double r = static_cast<double>(cfg.replications);
    rep.reject_er = static_cast<double>(total.er) / r;
    rep.reject_rp = static_cast<double>(total.rp) / r;
    rep.reject_ep = static_cast<double>(total.ep) / r;
    rep.reject_global = static_cast<double>(total.global) / r;
    const auto reps_u = static_cast<std::uint64_t>(cfg.replications);
    rep.n_final_median = histogram_quantile(total.n_final_hist, reps_u, 0.5);
    rep.n_final_q1 = histogram_quantile(total.n_final_hist, reps_u, 0.25);
    rep.n_final_q3 = histogram_quantile(total.n_final_hist, reps_u, 0.75);
    rep.n_final_mean = static_cast<double>(total.n_final_sum) / r;
    rep.mean_estimate = total.estimate_sum / r;
    return rep;
}

SimulationReport simulate_power(const ScenarioConfig& cfg, int workers,
                                SampleSizeCurve* shared_curve) {
    DesignSpec truth = cfg.spec;
    truth.mu_e = cfg.truth_means[0];
    truth.mu_r = cfg.truth_means[1];
    truth.mu_p = cfg.truth_means[2];
    if (!truth.in_h1())
        throw std::domain_error("simulate_power: truth means must lie inside H1");
    return run_scenario(cfg, workers, shared_curve);
}

SimulationReport simulate_type1(const ScenarioConfig& cfg, NullBoundary target, int workers,
                                SampleSizeCurve* shared_curve) {
    const auto& mu = cfg.truth_means;
    const double tol = 1e-12;
    switch (target) {
        case NullBoundary::ER:
            if (std::fabs((mu[0] - mu[1]) - cfg.spec.delta_er) > tol)
                throw std::domain_error("simulate_type1: means not on the ER boundary");
            break;
        case NullBoundary::EP:
            if (std::fabs((mu[2] - mu[0]) - cfg.spec.delta_ep) > tol)
                throw std::domain_error("simulate_type1: means not on the EP boundary");
            break;
        case NullBoundary::RP:
            if (std::fabs((mu[2] - mu[1]) - cfg.spec.delta_rp) > tol)
                throw std::domain_error("simulate_type1: means not on the RP boundary");
            break;
    }
    return run_scenario(cfg, workers, shared_curve);
}

}  // namespace gsd
