#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relsim/params.hpp"
#include "relsim/simulation.hpp"
#include "relsim/stats.hpp"

namespace relsim {

struct SweepAxis {
    std::string key;             // a SimParams field name
    std::vector<double> values;  // already-evaluated numbers
};

// A one-way or two-way parameter sweep. Cells are the cross product of the
// axis values in row-major order (first axis outermost).
struct SweepSpec {
    std::string name;
    std::vector<SweepAxis> axes;  // one or two entries
    int replications = 1;
    std::uint64_t base_seed = 0;
};

struct SweepCellResult {
    std::vector<double> param_values;        // one per axis
    std::vector<RunResult> runs;             // one per replication
    std::vector<StatsSummary> metric_stats;  // aligned with run_metrics()
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepCellResult> cells;
};

std::size_t cell_count(const SweepSpec& spec);

// Seed handed to a cell's simulations; depends only on (base_seed, cell
// index), never on execution order, so cells can run in any order or in
// parallel without changing a single result.
std::uint64_t derive_cell_seed(std::uint64_t base_seed, std::size_t cell_index);

// Runs one cell: applies the cell's overrides to `base`, validates, and runs
// every replication. Throws ConfigError naming the cell when the override
// produces an invalid configuration.
SweepCellResult run_cell(const SweepSpec& spec, const SimParams& base, std::size_t cell_index);

// Runs every cell in index order. Axis keys are checked before any simulation
// starts.
SweepResult run_sweep(const SweepSpec& spec, const SimParams& base);

}  // namespace relsim
