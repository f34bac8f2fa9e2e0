#include "relsim/sweep.hpp"

#include "relsim/config.hpp"

namespace relsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void check_spec(const SweepSpec& spec) {
    if (spec.axes.empty() || spec.axes.size() > 2) {
        throw ConfigError("a sweep takes one or two parameter axes");
    }
    for (const SweepAxis& axis : spec.axes) {
        if (axis.values.empty()) {
            throw ConfigError("sweep axis '" + axis.key + "' has no values");
        }
    }
    if (spec.axes.size() == 2 && spec.axes[0].key == spec.axes[1].key) {
        throw ConfigError("sweep axes must use different parameters");
    }
    if (spec.replications < 1) {
        throw ConfigError("replications must be >= 1");
    }
    // Probe the keys against a scratch copy so typos surface before any run.
    SimParams probe;
    for (const SweepAxis& axis : spec.axes) {
        set_param(probe, axis.key, axis.values.front());
    }
}

}  // namespace

std::size_t cell_count(const SweepSpec& spec) {
    std::size_t n = 1;
    for (const SweepAxis& axis : spec.axes) n *= axis.values.size();
    return n;
}

std::uint64_t derive_cell_seed(std::uint64_t base_seed, std::size_t cell_index) {
    return splitmix64(splitmix64(base_seed) ^ static_cast<std::uint64_t>(cell_index));
}

SweepCellResult run_cell(const SweepSpec& spec, const SimParams& base, std::size_t cell_index) {
    check_spec(spec);
    if (cell_index >= cell_count(spec)) {
        throw std::out_of_range("sweep cell index out of range");
    }

    SweepCellResult cell;
    SimParams params = base;
    std::size_t inner = spec.axes.size() == 2 ? spec.axes[1].values.size() : 1;
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        std::size_t idx = (a == 0) ? cell_index / inner : cell_index % inner;
        double value = spec.axes[a].values[idx];
        cell.param_values.push_back(value);
        set_param(params, spec.axes[a].key, value);
    }

    try {
        validate(params);
    } catch (const ConfigError& e) {
        throw ConfigError("sweep cell " + std::to_string(cell_index) + ": " + e.what());
    }

    std::uint64_t cell_seed = derive_cell_seed(spec.base_seed, cell_index);
    cell.runs.reserve(static_cast<std::size_t>(spec.replications));
    for (int rep = 0; rep < spec.replications; ++rep) {
        cell.runs.push_back(run_simulation(params, cell_seed, static_cast<std::uint64_t>(rep)));
    }

    for (const MetricDef& metric : run_metrics()) {
        std::vector<double> samples;
        samples.reserve(cell.runs.size());
        for (const RunResult& run : cell.runs) samples.push_back(metric.get(run));
        cell.metric_stats.push_back(summarize(samples));
    }
    return cell;
}

SweepResult run_sweep(const SweepSpec& spec, const SimParams& base) {
    check_spec(spec);
    SweepResult result;
    result.spec = spec;
    std::size_t cells = cell_count(spec);
    result.cells.reserve(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        result.cells.push_back(run_cell(spec, base, i));
    }
    return result;
}

}  // namespace relsim
