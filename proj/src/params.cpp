#include "relsim/params.hpp"

#include <cmath>
#include <string>

namespace relsim {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

void require_finite_nonneg(double v, const char* name) {
    require(std::isfinite(v) && v >= 0.0, std::string(name) + " must be finite and >= 0");
}

void require_probability(double v, const char* name) {
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0, std::string(name) + " must be in [0, 1]");
}

}  // namespace

void validate(const SimParams& p) {
    require_finite_nonneg(p.random_failure_rate, "random_failure_rate");
    require_finite_nonneg(p.systematic_rate_multiplier, "systematic_rate_multiplier");
    require_probability(p.systematic_failure_fraction, "systematic_failure_fraction");

    require(p.job_size >= 1, "job_size must be >= 1");
    require(std::isfinite(p.job_length) && p.job_length > 0.0, "job_length must be finite and > 0");
    require(p.warm_standbys >= 0, "warm_standbys must be >= 0");

    require_finite_nonneg(p.recovery_time, "recovery_time");
    require_finite_nonneg(p.host_selection_time, "host_selection_time");
    require_finite_nonneg(p.waiting_time, "waiting_time");
    require_finite_nonneg(p.preemption_cost_per_server, "preemption_cost_per_server");

    require(p.working_pool_size >= 0, "working_pool_size must be >= 0");
    require(p.spare_pool_size >= 0, "spare_pool_size must be >= 0");

    require_probability(p.auto_repair_probability, "auto_repair_probability");
    require_probability(p.auto_fail_probability, "auto_fail_probability");
    require_probability(p.manual_fail_probability, "manual_fail_probability");
    require_finite_nonneg(p.auto_repair_time, "auto_repair_time");
    require_finite_nonneg(p.manual_repair_time, "manual_repair_time");
    require_probability(p.diagnosis_uncertainty, "diagnosis_uncertainty");

    if (p.regeneration_period) {
        require(std::isfinite(*p.regeneration_period) && *p.regeneration_period > 0.0,
                "regeneration_period must be finite and > 0");
    }
    // Removal is all-or-nothing: a threshold without a window (or vice versa)
    // is almost certainly a configuration mistake.
    require(p.removal_threshold.has_value() == p.removal_window.has_value(),
            "removal_threshold and removal_window must be set together");
    if (p.removal_threshold) {
        require(*p.removal_threshold >= 1, "removal_threshold must be >= 1");
        require(std::isfinite(*p.removal_window) && *p.removal_window > 0.0,
                "removal_window must be finite and > 0");
    }

    require(p.replications >= 1, "replications must be >= 1");

    // The pools together must at least cover the compute group; the stricter
    // requirement that the working pool alone covers it is enforced where the
    // cluster is built.
    require(p.working_pool_size + p.spare_pool_size >= p.job_size,
            "working_pool_size + spare_pool_size must be >= job_size");
}

}  // namespace relsim
