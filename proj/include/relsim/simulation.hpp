#pragma once

#include <cstdint>
#include <deque>
#include <set>
#include <unordered_map>
#include <vector>

#include "relsim/cluster.hpp"
#include "relsim/kernel.hpp"
#include "relsim/params.hpp"
#include "relsim/repair.hpp"

namespace relsim {

// Lifecycle of the single training job. Compute only happens in Computing;
// every other phase is overhead the run clock keeps ticking through.
enum class JobPhase {
    HostSelection,    // group formed, paying host_selection_time
    AcquiringSpares,  // short of job_size, a spare-pool batch is in flight
    Stalled,          // short of job_size and nothing in flight; waiting on repairs
    Recovering,       // paying recovery_time before compute (re)starts
    Computing,
    Done,
};

struct JobState {
    JobPhase phase = JobPhase::HostSelection;
    std::set<int> computing;   // exactly job_size entries while Computing
    std::deque<int> standby;   // warm standbys, FIFO: swaps pop the front, returns join the back
    double remaining_length = 0.0;  // compute minutes still owed
    SimTime segment_start = 0.0;    // when the current compute segment began
};

// Per-run tallies; a subset becomes the reported metrics, the rest exists for
// diagnostics and tests.
struct RunResult {
    double total_time = 0.0;
    int failures_total = 0;
    int failures_random = 0;
    int failures_systematic = 0;
    int preemptions = 0;
    int auto_repairs = 0;    // repair plans entering the automated stage (all of them)
    int manual_repairs = 0;  // plans that escalate to the manual stage
    double avg_run_duration = 0.0;  // job_length / (failures + 1)
    int stalls = 0;

    double preemption_cost = 0.0;
    int segments = 0;
    int host_selections = 0;
    int removed = 0;
    double computed_minutes = 0.0;  // accumulated compute credit, equals job_length at the end
    double exposure_good = 0.0;     // server-minutes computed while Good
    double exposure_bad = 0.0;      // server-minutes computed while Bad

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

struct TraceEntry {
    SimTime time;
    EventKind kind;
    EventPayload payload;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

// Promotes the first warm standby into the compute group and returns its id.
// Throws std::logic_error when no standby is available; callers must check.
int swap_warm_standby(JobState& job, std::vector<Server>& servers);

// Pulls up to `wanted` servers out of the spare pool (lowest ids first) and
// marks them assigned; they preempt whatever they were doing, so each one
// counts against the preemption budget. The whole batch becomes usable after a
// single waiting_time delay, which the caller schedules.
struct SpareBatch {
    std::vector<int> servers;
    double preemption_cost = 0.0;
};

SpareBatch acquire_from_spare(PoolState& pools, std::vector<Server>& servers, int wanted,
                              double cost_per_server);

struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One full run: builds the cluster, starts the job, drives events until the
// job completes. Deterministic given (params, seed, replication).
class Simulation {
public:
    Simulation(const SimParams& params, std::uint64_t seed, std::uint64_t replication);

    RunResult run();

    // Audits pool/assignment/repair bookkeeping after every event (tests).
    void enable_invariant_checks(bool on) { check_invariants_ = on; }
    // Records every delivered event (tests compare traces between runs).
    void enable_trace(bool on) { capture_trace_ = on; }
    const std::vector<TraceEntry>& trace() const { return trace_; }

    const JobState& job() const { return job_; }
    const PoolState& pools() const { return pools_; }
    const std::vector<Server>& servers() const { return servers_; }

private:
    void start_job(SimTime now);
    void request_servers(SimTime now);
    void fill_compute_group();
    void begin_compute_segment(SimTime now);
    void schedule_segment_event(SimTime now);
    void accrue_exposure(SimTime now);

    void handle_failure(SimTime now, int server, FailureKind kind);
    void handle_host_selection_done(SimTime now);
    void handle_recovery_done(SimTime now);
    void handle_spare_acquisition(SimTime now, int batch);
    void handle_repair_stage_done(SimTime now, int server, int plan, bool manual_stage);
    void finish_repair(SimTime now, int server, int plan);
    void reintegrate_repaired(SimTime now, int server, RepairHint hint);
    void handle_regeneration(SimTime now);
    void handle_job_complete(SimTime now);

    void release_to_pools(int server);
    void trim_standbys();
    void check_state() const;

    SimParams params_;
    FailureModel fmodel_;
    RepairParams rparams_;

    EventQueue queue_;
    RngStream failure_rng_;
    RngStream repair_rng_;
    RngStream diagnosis_rng_;
    RngStream topology_rng_;

    std::vector<Server> servers_;
    PoolState pools_;
    JobState job_;

    std::unordered_map<int, RepairPlan> plans_;
    int next_plan_id_ = 0;
    std::unordered_map<int, std::vector<int>> pending_batches_;
    int next_batch_id_ = 0;
    int pending_spare_count_ = 0;

    EventHandle segment_event_;
    SimTime hazard_start_ = 0.0;

    RunResult result_;
    bool check_invariants_ = false;
    bool capture_trace_ = false;
    std::vector<TraceEntry> trace_;
};

RunResult run_simulation(const SimParams& params, std::uint64_t seed, std::uint64_t replication);

// The reported metrics, in output order.
struct MetricDef {
    const char* name;
    double (*get)(const RunResult&);
};

const std::vector<MetricDef>& run_metrics();

}  // namespace relsim
