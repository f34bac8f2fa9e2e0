#include "relsim/cluster.hpp"

#include <cmath>
#include <numeric>

namespace relsim {

FailureModel failure_model_from(const SimParams& params) {
    FailureModel model;
    model.random_rate = params.random_failure_rate;
    model.systematic_rate = params.systematic_rate_multiplier * params.random_failure_rate;
    model.systematic_fraction = params.systematic_failure_fraction;
    model.regeneration_period = params.regeneration_period;
    return model;
}

namespace {

// Deterministic count: no run-to-run jitter in how many servers are unhealthy.
int bad_count_for(double fraction, std::size_t population) {
    return static_cast<int>(std::llround(fraction * static_cast<double>(population)));
}

// Marks k of the given servers Bad, uniformly without replacement
// (partial Fisher-Yates over the candidate ids).
void mark_bad(std::vector<Server>& servers, std::vector<int>& candidates, int k, RngStream& rng) {
    for (int i = 0; i < k; ++i) {
        std::size_t j = i + rng.uniform_index(candidates.size() - i);
        std::swap(candidates[i], candidates[j]);
        servers[candidates[i]].health = ServerHealth::Bad;
    }
}

}  // namespace

Cluster build_cluster(const SimParams& params, RngStream& rng) {
    if (params.working_pool_size < params.job_size) {
        throw ConfigError("working_pool_size is smaller than job_size; the job can never start");
    }

    Cluster cluster;
    int total = params.working_pool_size + params.spare_pool_size;
    cluster.servers.resize(total);

    for (int id = 0; id < total; ++id) {
        Server& s = cluster.servers[id];
        s.id = id;
        if (id < params.working_pool_size) {
            s.status = ServerStatus::IdleInWorkingPool;
            s.home = PoolHome::Working;
            cluster.pools.working.insert(id);
        } else {
            s.status = ServerStatus::IdleInSparePool;
            s.home = PoolHome::Spare;
            cluster.pools.spare.insert(id);
        }
    }

    std::vector<int> ids(total);
    std::iota(ids.begin(), ids.end(), 0);
    mark_bad(cluster.servers, ids, bad_count_for(params.systematic_failure_fraction, ids.size()), rng);
    return cluster;
}

FailureDraw sample_time_to_failure(const Server& server, const FailureModel& model, RngStream& rng) {
    FailureDraw draw;
    draw.delay = rng.exponential(model.random_rate);
    draw.kind = FailureKind::Random;
    if (server.health == ServerHealth::Bad) {
        double systematic = rng.exponential(model.systematic_rate);
        if (systematic < draw.delay) {
            draw.delay = systematic;
            draw.kind = FailureKind::Systematic;
        }
    }
    return draw;
}

void regenerate_bad_set(std::vector<Server>& servers, const FailureModel& model, RngStream& rng) {
    std::vector<int> live;
    live.reserve(servers.size());
    for (Server& s : servers) {
        if (s.status == ServerStatus::Removed) continue;
        s.health = ServerHealth::Good;
        live.push_back(s.id);
    }
    mark_bad(servers, live, bad_count_for(model.systematic_fraction, live.size()), rng);
}

}  // namespace relsim
