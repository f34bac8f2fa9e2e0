#pragma once

#include <optional>
#include <vector>

#include "relsim/cluster.hpp"
#include "relsim/kernel.hpp"
#include "relsim/params.hpp"

namespace relsim {

struct RepairParams {
    double auto_repair_probability = 0.80;
    double auto_fail_probability = 0.40;
    double manual_fail_probability = 0.20;
    double auto_repair_time = 120.0;
    double manual_repair_time = 2880.0;
    double diagnosis_uncertainty = 0.0;
    std::optional<int> removal_threshold;
    std::optional<double> removal_window;
};

RepairParams repair_params_from(const SimParams& params);

// Everything about a repair visit is drawn up front: whether it escalates past
// the automated stage, how long each stage takes, and whether the final stage
// resolves the underlying defect. Repairs carry no memory between visits.
struct RepairPlan {
    int server = -1;
    bool escalates = false;      // plan is [auto, manual] instead of [auto]
    double auto_duration = 0.0;
    double manual_duration = 0.0;  // meaningful only when escalates
    bool resolved = false;         // outcome of the final stage
};

RepairPlan draw_repair_plan(int server, const RepairParams& params, RngStream& rng);

// Picks which server gets pulled for repair. Diagnosis is imperfect: with
// probability diagnosis_uncertainty some other server currently assigned to
// the job is blamed instead of the one that failed. `assigned` lists every
// assigned server (computing and standby); when the failed server has no
// assigned peers the diagnosis falls back to it.
int diagnose(int failed_server, const std::vector<int>& assigned, double uncertainty, RngStream& rng);

enum class RepairHint { ReturnToJob, ReturnToWorking };

// Applies the plan outcome to the server's health: a resolved repair clears
// the systematic defect, an unresolved one leaves it in place, and a Good
// server stays Good either way. The hint tells the caller where the server
// should go next.
RepairHint complete_repair(Server& server, const RepairPlan& plan, bool origin_job_running);

enum class RemovalDecision { Keep, Remove };

// Appends this failure to the server's log, then applies the removal rule:
// remove when more than removal_threshold failures landed on the server inside
// the trailing removal_window (the current failure counts). With removal
// disabled the decision is always Keep.
RemovalDecision record_failure_and_check_removal(Server& server, SimTime now, FailureKind kind,
                                                 const RepairParams& params);

}  // namespace relsim
