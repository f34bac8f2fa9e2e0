#pragma once

#include <cstddef>
#include <vector>

namespace relsim {

struct StatsSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;  // identical to p50
    double stddev = 0.0;  // sample standard deviation (n - 1); 0 for a single sample
    double p50 = 0.0;
    double p90 = 0.0;
    double p95 = 0.0;
    double p99 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

// Percentiles use the nearest-rank rule: the ceil(p * n)-th smallest sample,
// 1-indexed, so every reported percentile is an actual observation.
// Throws std::invalid_argument on an empty sample set.
StatsSummary summarize(const std::vector<double>& samples);

}  // namespace relsim
