#pragma once

#include <optional>
#include <set>
#include <vector>

#include "relsim/kernel.hpp"
#include "relsim/params.hpp"

namespace relsim {

// Good servers only ever fail at the background random rate. Bad servers
// additionally carry a systematic defect that fails at a higher rate until a
// successful repair clears it.
enum class ServerHealth { Good, Bad };

enum class ServerStatus {
    IdleInWorkingPool,
    IdleInSparePool,
    AssignedComputing,
    AssignedStandby,
    InAutoRepair,
    InManualRepair,
    Removed,
};

enum class FailureKind { Random, Systematic };

struct FailureRecord {
    SimTime time;
    FailureKind kind;
};

// Which pool a server belongs to. Spare-pool servers can be borrowed by the
// job, but they go back to the spare pool as soon as the need subsides;
// working-pool servers always idle in the working pool between assignments.
enum class PoolHome { Working, Spare };

struct Server {
    int id = -1;
    ServerHealth health = ServerHealth::Good;
    ServerStatus status = ServerStatus::IdleInWorkingPool;
    PoolHome home = PoolHome::Working;
    std::optional<int> origin_job;          // job this server was serving when pulled for repair
    std::vector<FailureRecord> failure_log;  // failures attributed to this server
};

// Idle-server bookkeeping. A server id appears in at most one of the two sets;
// assigned and in-repair servers appear in neither.
struct PoolState {
    std::set<int> working;
    std::set<int> spare;
    int removed_count = 0;
};

struct FailureModel {
    double random_rate = 0.0;
    double systematic_rate = 0.0;
    double systematic_fraction = 0.0;
    std::optional<double> regeneration_period;
};

FailureModel failure_model_from(const SimParams& params);

// Creates working_pool_size + spare_pool_size servers, ids dense from 0, and
// marks round(fraction * total) of them Bad, chosen uniformly at random across
// both pools. Throws ConfigError when the working pool cannot seat the job.
struct Cluster {
    std::vector<Server> servers;
    PoolState pools;
};

Cluster build_cluster(const SimParams& params, RngStream& rng);

// Time until this server would fail if it computed uninterrupted from now on,
// together with the classification of that failure. Bad servers race the two
// hazards; the earlier one wins. A zero rate never fires (+infinity).
struct FailureDraw {
    SimTime delay = kTimeInfinity;
    FailureKind kind = FailureKind::Random;
};

FailureDraw sample_time_to_failure(const Server& server, const FailureModel& model, RngStream& rng);

// Re-rolls which servers carry the systematic defect: every non-removed server
// is reset to Good, then round(fraction * live) are re-marked Bad uniformly at
// random. Statuses, assignments and failure logs are untouched.
void regenerate_bad_set(std::vector<Server>& servers, const FailureModel& model, RngStream& rng);

}  // namespace relsim
