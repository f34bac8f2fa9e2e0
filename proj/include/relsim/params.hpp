#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace relsim {

// Full set of tunables for one simulated training run. Times are minutes,
// rates are per-minute hazards. Defaults describe a 4096-server job on a
// 4160-server working pool; see README for the full table.
struct SimParams {
    // Failure process.
    double random_failure_rate = 0.01 / (24 * 60);  // applies to every computing server
    double systematic_rate_multiplier = 5.0;        // systematic hazard = multiplier * random rate
    double systematic_failure_fraction = 0.15;      // share of servers that carry the systematic hazard

    // Job shape.
    int job_size = 4096;
    double job_length = 256.0 * 24 * 60;  // failure-free compute time required
    int warm_standbys = 16;

    // Scheduling and recovery delays.
    double recovery_time = 20.0;        // reload from checkpoint, paid on every (re)start
    double host_selection_time = 3.0;   // paid when the server group is re-formed
    double waiting_time = 20.0;         // delay for a batch acquired from the spare pool
    double preemption_cost_per_server = 0.0;  // accounting-only cost per preempted spare

    // Pools.
    int working_pool_size = 4160;
    int spare_pool_size = 200;

    // Repair pipeline.
    double auto_repair_probability = 0.80;  // chance the plan is automated-only
    double auto_fail_probability = 0.40;    // chance the automated stage does not resolve
    double manual_fail_probability = 0.20;  // chance the manual stage does not resolve
    double auto_repair_time = 120.0;        // mean automated repair duration
    double manual_repair_time = 2.0 * 1440; // mean manual repair duration
    double diagnosis_uncertainty = 0.0;     // chance the wrong server is pulled for repair

    // Optional mechanisms, disabled unless configured.
    std::optional<double> regeneration_period;   // re-roll which servers are unhealthy every N minutes
    std::optional<int> removal_threshold;        // remove a server after more than K failures...
    std::optional<double> removal_window;        // ...within this many minutes

    // Experiment plumbing.
    std::uint64_t base_seed = 0;
    int replications = 10;

    friend bool operator==(const SimParams&, const SimParams&) = default;
};

// Throws ConfigError naming the offending field when a value is out of range
// or the cross-field requirements do not hold.
void validate(const SimParams& params);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace relsim
