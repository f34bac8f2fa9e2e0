#include "relsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace relsim {

namespace {
constexpr int kJobId = 0;  // single-job model; servers remember it as their origin
}

int swap_warm_standby(JobState& job, std::vector<Server>& servers) {
    if (job.standby.empty()) {
        throw std::logic_error("swap_warm_standby called with no standby available");
    }
    int id = job.standby.front();
    job.standby.pop_front();
    servers[id].status = ServerStatus::AssignedComputing;
    job.computing.insert(id);
    return id;
}

SpareBatch acquire_from_spare(PoolState& pools, std::vector<Server>& servers, int wanted,
                              double cost_per_server) {
    if (wanted < 1) throw std::logic_error("acquire_from_spare needs a positive request");
    SpareBatch batch;
    while (static_cast<int>(batch.servers.size()) < wanted && !pools.spare.empty()) {
        int id = *pools.spare.begin();
        pools.spare.erase(pools.spare.begin());
        servers[id].status = ServerStatus::AssignedStandby;
        servers[id].origin_job = kJobId;
        batch.servers.push_back(id);
    }
    batch.preemption_cost = cost_per_server * static_cast<double>(batch.servers.size());
    return batch;
}

Simulation::Simulation(const SimParams& params, std::uint64_t seed, std::uint64_t replication)
    : params_(params),
      fmodel_(failure_model_from(params)),
      rparams_(repair_params_from(params)),
      failure_rng_(seed, replication, "failure"),
      repair_rng_(seed, replication, "repair"),
      diagnosis_rng_(seed, replication, "diagnosis"),
      topology_rng_(seed, replication, "topology") {
    validate(params_);
    Cluster cluster = build_cluster(params_, topology_rng_);
    servers_ = std::move(cluster.servers);
    pools_ = std::move(cluster.pools);
    job_.remaining_length = params_.job_length;
}

RunResult Simulation::run() {
    start_job(0.0);
    if (fmodel_.regeneration_period) {
        queue_.schedule(*fmodel_.regeneration_period, EventKind::RegenerationTick);
    }

    while (auto ev = queue_.next_event()) {
        if (capture_trace_) trace_.push_back({ev->time, ev->kind, ev->payload});
        switch (ev->kind) {
            case EventKind::ServerFailure:
                handle_failure(ev->time, ev->payload.server,
                               static_cast<FailureKind>(ev->payload.aux));
                break;
            case EventKind::AutoRepairDone:
                handle_repair_stage_done(ev->time, ev->payload.server, ev->payload.plan, false);
                break;
            case EventKind::ManualRepairDone:
                handle_repair_stage_done(ev->time, ev->payload.server, ev->payload.plan, true);
                break;
            case EventKind::HostSelectionDone:
                handle_host_selection_done(ev->time);
                break;
            case EventKind::RecoveryDone:
                handle_recovery_done(ev->time);
                break;
            case EventKind::SpareAcquisitionDone:
                handle_spare_acquisition(ev->time, ev->payload.batch);
                break;
            case EventKind::RegenerationTick:
                handle_regeneration(ev->time);
                break;
            case EventKind::JobComplete:
                handle_job_complete(ev->time);
                break;
        }
        if (check_invariants_) check_state();
        if (job_.phase == JobPhase::Done) break;
        // A stalled job with no repair or spare batch in flight can never be
        // handed a server again; stop even if a regeneration clock still ticks.
        if (job_.phase == JobPhase::Stalled && plans_.empty() && pending_batches_.empty()) {
            break;
        }
    }

    if (job_.phase != JobPhase::Done) {
        throw SimulationError(
            "job cannot finish: the pools are empty and no repair can return a server "
            "(cluster exhausted by removals)");
    }

    result_.avg_run_duration =
        params_.job_length / static_cast<double>(result_.failures_total + 1);
    return result_;
}

// Reserves servers toward the full allotment (job_size + warm_standbys) from
// the working pool. The spare pool is only tapped, as one batched request, for
// whatever the compute group itself is still missing: borrowed spares stand in
// for failed servers, they never pad the standby buffer.
void Simulation::request_servers(SimTime now) {
    int held = static_cast<int>(job_.computing.size() + job_.standby.size()) + pending_spare_count_;
    int need = params_.job_size + params_.warm_standbys - held;

    while (need > 0 && !pools_.working.empty()) {
        int id = *pools_.working.begin();
        pools_.working.erase(pools_.working.begin());
        servers_[id].status = ServerStatus::AssignedStandby;
        servers_[id].origin_job = kJobId;
        job_.standby.push_back(id);
        --need;
        ++held;
    }

    int group_need = params_.job_size - held;
    if (group_need > 0 && !pools_.spare.empty()) {
        SpareBatch batch = acquire_from_spare(pools_, servers_, group_need,
                                              params_.preemption_cost_per_server);
        int batch_id = next_batch_id_++;
        pending_spare_count_ += static_cast<int>(batch.servers.size());
        result_.preemptions += static_cast<int>(batch.servers.size());
        result_.preemption_cost += batch.preemption_cost;
        EventPayload payload;
        payload.batch = batch_id;
        pending_batches_.emplace(batch_id, std::move(batch.servers));
        queue_.schedule(now + params_.waiting_time, EventKind::SpareAcquisitionDone, payload);
    }
}

void Simulation::fill_compute_group() {
    while (static_cast<int>(job_.computing.size()) < params_.job_size && !job_.standby.empty()) {
        swap_warm_standby(job_, servers_);
    }
}

// Decides what the job does next given what it currently holds. Host selection
// begins as soon as the compute group is full; standbys beyond that are
// welcome but never hold up the job.
void Simulation::start_job(SimTime now) {
    request_servers(now);
    fill_compute_group();
    trim_standbys();

    if (static_cast<int>(job_.computing.size()) == params_.job_size) {
        job_.phase = JobPhase::HostSelection;
        ++result_.host_selections;
        queue_.schedule(now + params_.host_selection_time, EventKind::HostSelectionDone);
    } else if (pending_spare_count_ > 0) {
        job_.phase = JobPhase::AcquiringSpares;
    } else if (job_.phase != JobPhase::Stalled) {
        job_.phase = JobPhase::Stalled;
        ++result_.stalls;
    }
}

void Simulation::handle_host_selection_done(SimTime now) {
    if (job_.phase != JobPhase::HostSelection) {
        throw std::logic_error("HostSelectionDone outside of host selection");
    }
    job_.phase = JobPhase::Recovering;
    queue_.schedule(now + params_.recovery_time, EventKind::RecoveryDone);
}

void Simulation::handle_recovery_done(SimTime now) {
    if (job_.phase != JobPhase::Recovering ||
        static_cast<int>(job_.computing.size()) != params_.job_size) {
        throw std::logic_error("RecoveryDone without a full compute group");
    }
    begin_compute_segment(now);
}

void Simulation::begin_compute_segment(SimTime now) {
    job_.phase = JobPhase::Computing;
    job_.segment_start = now;
    hazard_start_ = now;
    ++result_.segments;
    schedule_segment_event(now);
}

// Draws every computing server's time-to-failure and schedules whichever comes
// first: the earliest failure, or job completion if nothing fails in time.
// Ties go to completion.
void Simulation::schedule_segment_event(SimTime now) {
    double best = kTimeInfinity;
    int best_server = -1;
    FailureKind best_kind = FailureKind::Random;
    for (int id : job_.computing) {
        FailureDraw draw = sample_time_to_failure(servers_[id], fmodel_, failure_rng_);
        if (draw.delay < best) {
            best = draw.delay;
            best_server = id;
            best_kind = draw.kind;
        }
    }

    double remaining_now = std::max(0.0, job_.remaining_length - (now - job_.segment_start));
    if (best < remaining_now) {
        EventPayload payload;
        payload.server = best_server;
        payload.aux = static_cast<int>(best_kind);
        segment_event_ = queue_.schedule(now + best, EventKind::ServerFailure, payload);
    } else {
        segment_event_ = queue_.schedule(now + remaining_now, EventKind::JobComplete);
    }
}

void Simulation::accrue_exposure(SimTime now) {
    double dur = now - hazard_start_;
    if (dur <= 0.0) return;
    for (int id : job_.computing) {
        if (servers_[id].health == ServerHealth::Good) {
            result_.exposure_good += dur;
        } else {
            result_.exposure_bad += dur;
        }
    }
    hazard_start_ = now;
}

void Simulation::handle_failure(SimTime now, int failed, FailureKind kind) {
    if (job_.phase != JobPhase::Computing) {
        throw std::logic_error("ServerFailure outside a compute segment");
    }
    if (kind == FailureKind::Systematic && servers_[failed].health != ServerHealth::Bad) {
        throw std::logic_error("systematic failure fired on a healthy server");
    }
    segment_event_.valid = false;  // it just fired

    // Work survives up to the instant of the failure; only the segment ends.
    accrue_exposure(now);
    double credit = now - job_.segment_start;
    job_.remaining_length = std::max(0.0, job_.remaining_length - credit);
    result_.computed_minutes += credit;

    ++result_.failures_total;
    if (kind == FailureKind::Random) {
        ++result_.failures_random;
    } else {
        ++result_.failures_systematic;
    }

    // The operator pulls whichever server the (imperfect) diagnosis blames.
    std::vector<int> assigned;
    assigned.reserve(job_.computing.size() + job_.standby.size());
    assigned.insert(assigned.end(), job_.computing.begin(), job_.computing.end());
    assigned.insert(assigned.end(), job_.standby.begin(), job_.standby.end());
    int target = diagnose(failed, assigned, rparams_.diagnosis_uncertainty, diagnosis_rng_);

    if (auto it = job_.computing.find(target); it != job_.computing.end()) {
        job_.computing.erase(it);
    } else {
        auto pos = std::find(job_.standby.begin(), job_.standby.end(), target);
        if (pos == job_.standby.end()) {
            throw std::logic_error("diagnosis blamed a server the job does not hold");
        }
        job_.standby.erase(pos);
    }

    // A misdiagnosed bystander did not itself exhibit the systematic fault, so
    // its log records a plain failure; only the true culprit's log may say
    // Systematic.
    FailureKind recorded = (target == failed) ? kind : FailureKind::Random;
    RemovalDecision decision = record_failure_and_check_removal(servers_[target], now, recorded,
                                                                rparams_);
    if (decision == RemovalDecision::Remove) {
        servers_[target].status = ServerStatus::Removed;
        servers_[target].origin_job.reset();
        ++pools_.removed_count;
        ++result_.removed;
    } else {
        RepairPlan plan = draw_repair_plan(target, rparams_, repair_rng_);
        int plan_id = next_plan_id_++;
        servers_[target].status = ServerStatus::InAutoRepair;
        ++result_.auto_repairs;
        if (plan.escalates) ++result_.manual_repairs;
        EventPayload payload;
        payload.server = target;
        payload.plan = plan_id;
        queue_.schedule(now + plan.auto_duration, EventKind::AutoRepairDone, payload);
        plans_.emplace(plan_id, plan);
    }

    // Resume: a warm standby slots in for the cost of recovery alone; otherwise
    // the job goes back through host selection (or waits for servers).
    fill_compute_group();
    if (static_cast<int>(job_.computing.size()) == params_.job_size) {
        job_.phase = JobPhase::Recovering;
        queue_.schedule(now + params_.recovery_time, EventKind::RecoveryDone);
    } else {
        start_job(now);
    }
}

void Simulation::handle_spare_acquisition(SimTime now, int batch_id) {
    auto it = pending_batches_.find(batch_id);
    if (it == pending_batches_.end()) {
        throw std::logic_error("spare batch arrived twice");
    }
    std::vector<int> arrivals = std::move(it->second);
    pending_batches_.erase(it);
    pending_spare_count_ -= static_cast<int>(arrivals.size());

    for (int id : arrivals) {
        job_.standby.push_back(id);
    }
    if (job_.phase == JobPhase::AcquiringSpares || job_.phase == JobPhase::Stalled) {
        start_job(now);
    } else {
        // A repair return refilled the group while the batch was in transit;
        // the borrowed servers are no longer needed.
        trim_standbys();
    }
}

void Simulation::handle_repair_stage_done(SimTime now, int server, int plan_id, bool manual_stage) {
    const RepairPlan& plan = plans_.at(plan_id);
    if (!manual_stage && plan.escalates) {
        servers_[server].status = ServerStatus::InManualRepair;
        EventPayload payload;
        payload.server = server;
        payload.plan = plan_id;
        queue_.schedule(now + plan.manual_duration, EventKind::ManualRepairDone, payload);
        return;
    }
    finish_repair(now, server, plan_id);
}

void Simulation::finish_repair(SimTime now, int server, int plan_id) {
    RepairPlan plan = plans_.at(plan_id);
    plans_.erase(plan_id);
    bool origin_running = servers_[server].origin_job.has_value() && job_.phase != JobPhase::Done;
    RepairHint hint = complete_repair(servers_[server], plan, origin_running);
    reintegrate_repaired(now, server, hint);
}

void Simulation::reintegrate_repaired(SimTime now, int server, RepairHint hint) {
    if (hint == RepairHint::ReturnToJob) {
        servers_[server].status = ServerStatus::AssignedStandby;
        job_.standby.push_back(server);
        // A starved job can move again the moment a repair hands a server back.
        if (job_.phase == JobPhase::Stalled || job_.phase == JobPhase::AcquiringSpares) {
            start_job(now);
        } else {
            // The return may have made a borrowed spare redundant, or pushed
            // the standby list past the allotment.
            trim_standbys();
        }
    } else {
        servers_[server].origin_job.reset();
        release_to_pools(server);
    }
}

void Simulation::release_to_pools(int server) {
    if (servers_[server].home == PoolHome::Working) {
        servers_[server].status = ServerStatus::IdleInWorkingPool;
        pools_.working.insert(server);
    } else {
        servers_[server].status = ServerStatus::IdleInSparePool;
        pools_.spare.insert(server);
    }
}

// Spare-pool servers are only on loan: once the compute group is whole again,
// any borrowed spare still waiting goes straight back to its pool. Standbys
// past the allotment (repairs outpacing failures) are shed to the working pool.
void Simulation::trim_standbys() {
    if (static_cast<int>(job_.computing.size()) == params_.job_size) {
        auto borrowed = [&](int id) { return servers_[id].home == PoolHome::Spare; };
        for (auto it = job_.standby.begin(); it != job_.standby.end();) {
            if (borrowed(*it)) {
                servers_[*it].origin_job.reset();
                release_to_pools(*it);
                it = job_.standby.erase(it);
            } else {
                ++it;
            }
        }
    }

    int allotment = params_.job_size + params_.warm_standbys;
    while (static_cast<int>(job_.computing.size() + job_.standby.size()) > allotment &&
           !job_.standby.empty()) {
        int id = job_.standby.back();
        job_.standby.pop_back();
        servers_[id].origin_job.reset();
        release_to_pools(id);
    }
}

void Simulation::handle_regeneration(SimTime now) {
    if (job_.phase == JobPhase::Computing) {
        // Close the hazard bookkeeping under the old health labels before the
        // re-roll, then redraw the segment's failure race under the new ones.
        accrue_exposure(now);
        regenerate_bad_set(servers_, fmodel_, topology_rng_);
        queue_.cancel(segment_event_);
        schedule_segment_event(now);
    } else {
        regenerate_bad_set(servers_, fmodel_, topology_rng_);
    }
    queue_.schedule(now + *fmodel_.regeneration_period, EventKind::RegenerationTick);
}

void Simulation::handle_job_complete(SimTime now) {
    if (job_.phase != JobPhase::Computing) {
        throw std::logic_error("JobComplete outside a compute segment");
    }
    accrue_exposure(now);
    result_.computed_minutes += job_.remaining_length;  // the segment delivered exactly what was left
    job_.remaining_length = 0.0;
    job_.phase = JobPhase::Done;
    result_.total_time = now;

    for (int id : job_.computing) {
        servers_[id].origin_job.reset();
        release_to_pools(id);
    }
    job_.computing.clear();
    for (int id : job_.standby) {
        servers_[id].origin_job.reset();
        release_to_pools(id);
    }
    job_.standby.clear();
}

// Cross-checks every piece of bookkeeping against server statuses. Cheap
// enough for test-sized clusters; not run in normal operation.
void Simulation::check_state() const {
    std::vector<int> claims(servers_.size(), 0);
    auto claim = [&](int id, ServerStatus expected, const char* where) {
        if (id < 0 || id >= static_cast<int>(servers_.size())) {
            throw std::logic_error(std::string("bookkeeping holds an invalid server id in ") + where);
        }
        if (servers_[id].status != expected) {
            throw std::logic_error(std::string("server status does not match its container: ") + where);
        }
        if (++claims[id] > 1) {
            throw std::logic_error(std::string("server claimed by two containers: ") + where);
        }
    };

    for (int id : pools_.working) {
        claim(id, ServerStatus::IdleInWorkingPool, "working pool");
        if (servers_[id].home != PoolHome::Working) {
            throw std::logic_error("spare-pool server idling in the working pool");
        }
    }
    for (int id : pools_.spare) {
        claim(id, ServerStatus::IdleInSparePool, "spare pool");
        if (servers_[id].home != PoolHome::Spare) {
            throw std::logic_error("working-pool server idling in the spare pool");
        }
    }
    for (int id : job_.computing) claim(id, ServerStatus::AssignedComputing, "compute group");
    for (int id : job_.standby) {
        claim(id, ServerStatus::AssignedStandby, "standby list");
        if (servers_[id].home != PoolHome::Working) {
            throw std::logic_error("a borrowed spare lingers as a warm standby");
        }
    }
    for (const auto& [batch_id, ids] : pending_batches_) {
        for (int id : ids) {
            claim(id, ServerStatus::AssignedStandby, "pending spare batch");
            if (servers_[id].home != PoolHome::Spare) {
                throw std::logic_error("a working-pool server inside a spare batch");
            }
        }
    }
    for (const auto& [plan_id, plan] : plans_) {
        ServerStatus st = servers_[plan.server].status;
        if (st != ServerStatus::InAutoRepair && st != ServerStatus::InManualRepair) {
            throw std::logic_error("repair plan references a server that is not in repair");
        }
        claim(plan.server, st, "repair pipeline");
    }

    int removed_seen = 0;
    for (const Server& s : servers_) {
        if (s.status == ServerStatus::Removed) {
            ++removed_seen;
            if (claims[s.id] != 0) throw std::logic_error("removed server still claimed");
        } else if (claims[s.id] != 1) {
            throw std::logic_error("server is in no container (conservation violated)");
        }
    }
    if (removed_seen != pools_.removed_count) {
        throw std::logic_error("removed_count out of sync");
    }

    if (job_.phase == JobPhase::Computing &&
        static_cast<int>(job_.computing.size()) != params_.job_size) {
        throw std::logic_error("computing without a full compute group");
    }
}

RunResult run_simulation(const SimParams& params, std::uint64_t seed, std::uint64_t replication) {
    Simulation sim(params, seed, replication);
    return sim.run();
}

const std::vector<MetricDef>& run_metrics() {
    static const std::vector<MetricDef> metrics = {
        {"total_time", [](const RunResult& r) { return r.total_time; }},
        {"failures_total", [](const RunResult& r) { return static_cast<double>(r.failures_total); }},
        {"failures_random", [](const RunResult& r) { return static_cast<double>(r.failures_random); }},
        {"failures_systematic",
         [](const RunResult& r) { return static_cast<double>(r.failures_systematic); }},
        {"preemptions", [](const RunResult& r) { return static_cast<double>(r.preemptions); }},
        {"auto_repairs", [](const RunResult& r) { return static_cast<double>(r.auto_repairs); }},
        {"manual_repairs", [](const RunResult& r) { return static_cast<double>(r.manual_repairs); }},
        {"avg_run_duration", [](const RunResult& r) { return r.avg_run_duration; }},
        {"stalls", [](const RunResult& r) { return static_cast<double>(r.stalls); }},
    };
    return metrics;
}

}  // namespace relsim
