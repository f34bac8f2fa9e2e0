#include "relsim/repair.hpp"

namespace relsim {

RepairParams repair_params_from(const SimParams& p) {
    RepairParams r;
    r.auto_repair_probability = p.auto_repair_probability;
    r.auto_fail_probability = p.auto_fail_probability;
    r.manual_fail_probability = p.manual_fail_probability;
    r.auto_repair_time = p.auto_repair_time;
    r.manual_repair_time = p.manual_repair_time;
    r.diagnosis_uncertainty = p.diagnosis_uncertainty;
    r.removal_threshold = p.removal_threshold;
    r.removal_window = p.removal_window;
    return r;
}

RepairPlan draw_repair_plan(int server, const RepairParams& params, RngStream& rng) {
    RepairPlan plan;
    plan.server = server;
    plan.escalates = rng.uniform() >= params.auto_repair_probability;
    plan.auto_duration = rng.exponential(1.0 / params.auto_repair_time);
    double final_fail = params.auto_fail_probability;
    if (plan.escalates) {
        plan.manual_duration = rng.exponential(1.0 / params.manual_repair_time);
        final_fail = params.manual_fail_probability;
    }
    plan.resolved = rng.uniform() >= final_fail;
    return plan;
}

int diagnose(int failed_server, const std::vector<int>& assigned, double uncertainty, RngStream& rng) {
    bool misdiagnose = rng.uniform() < uncertainty;
    if (!misdiagnose) return failed_server;

    std::size_t others = 0;
    for (int id : assigned) {
        if (id != failed_server) ++others;
    }
    if (others == 0) return failed_server;

    std::size_t pick = rng.uniform_index(others);
    for (int id : assigned) {
        if (id == failed_server) continue;
        if (pick == 0) return id;
        --pick;
    }
    return failed_server;  // unreachable
}

RepairHint complete_repair(Server& server, const RepairPlan& plan, bool origin_job_running) {
    if (plan.resolved && server.health == ServerHealth::Bad) {
        server.health = ServerHealth::Good;
    }
    return origin_job_running ? RepairHint::ReturnToJob : RepairHint::ReturnToWorking;
}

RemovalDecision record_failure_and_check_removal(Server& server, SimTime now, FailureKind kind,
                                                 const RepairParams& params) {
    server.failure_log.push_back({now, kind});
    if (!params.removal_threshold) return RemovalDecision::Keep;

    double window_start = now - *params.removal_window;
    int in_window = 0;
    // The log is append-only in time order; walk back until we leave the window.
    for (auto it = server.failure_log.rbegin(); it != server.failure_log.rend(); ++it) {
        if (it->time <= window_start) break;
        ++in_window;
    }
    return in_window > *params.removal_threshold ? RemovalDecision::Remove : RemovalDecision::Keep;
}

}  // namespace relsim
