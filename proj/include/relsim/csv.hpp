#pragma once

#include <string>

#include "relsim/sweep.hpp"

namespace relsim {

// Sidecar path for per-replication rows: "out.csv" -> "out.raw.csv".
std::string raw_csv_path(const std::string& path);

// Renders the per-cell summary table (one row per cell: axis values, then
// mean/median/stddev/p50/p90/p95/p99/min/max for every metric).
std::string render_summary_csv(const SweepResult& result);

// Renders one row per (cell, replication) with the raw metric values.
std::string render_raw_csv(const SweepResult& result);

// Writes both files. Output is written to a temporary file and renamed into
// place, so a failed write never leaves a half-written result behind. Throws
// std::runtime_error on I/O failure.
void write_results(const SweepResult& result, const std::string& path);

}  // namespace relsim
