#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gsd/simulate.hpp"

namespace gsd {

enum class RunKind { Power, T1eEr, T1eEp, T1eRp };

std::string run_kind_name(RunKind k);
RunKind parse_run_kind(const std::string& name);

/// One expanded grid point, ready to simulate. zeta_star marks scenarios
/// whose factor is solved from the expected-power equation before the run.
struct Scenario {
    ScenarioConfig config;
    RunKind kind = RunKind::Power;
    bool zeta_star = false;
};

/// A parsed configuration file: flat key-value sections plus a scenario
/// grid that expands as a cartesian product over mu_p, allocation, n1,
/// method, zeta and (for type I error studies) delta_er.
struct RunConfig {
    RunKind kind = RunKind::Power;
    long reps = 15000;
    std::uint64_t seed = 1;
    int workers = 0;  // 0: pick at run time
    std::vector<Scenario> scenarios;
};

/// Parses the configuration text. Errors mention the file name, line number
/// and offending key. `source_name` is used in messages only.
RunConfig parse_config(std::istream& in, const std::string& source_name);
RunConfig parse_config_file(const std::string& path);

/// The id under which a scenario is seeded and reported:
/// <kind>_<method>_muP<x>_a<ERP>_n1-<k>_der<d>_z<zeta|star>.
std::string scenario_id(RunKind kind, EstimatorMethod method, double mu_p,
                        const AllocationRatio& alloc, long n1, double delta_er,
                        const std::string& zeta_label);

}  // namespace gsd
