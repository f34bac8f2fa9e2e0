#include "relsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relsim {

namespace {

double nearest_rank(const std::vector<double>& sorted, double p) {
    double rank = std::ceil(p * static_cast<double>(sorted.size()));
    std::size_t index = rank < 1.0 ? 0 : static_cast<std::size_t>(rank) - 1;
    return sorted[std::min(index, sorted.size() - 1)];
}

}  // namespace

StatsSummary summarize(const std::vector<double>& samples) {
    if (samples.empty()) {
        throw std::invalid_argument("summarize requires at least one sample");
    }

    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());

    StatsSummary s;
    s.count = sorted.size();

    double sum = 0.0;
    for (double v : sorted) sum += v;
    s.mean = sum / static_cast<double>(s.count);

    if (s.count > 1) {
        double sq = 0.0;
        for (double v : sorted) sq += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(s.count - 1));
    }

    s.p50 = nearest_rank(sorted, 0.50);
    s.p90 = nearest_rank(sorted, 0.90);
    s.p95 = nearest_rank(sorted, 0.95);
    s.p99 = nearest_rank(sorted, 0.99);
    s.median = s.p50;
    s.min = sorted.front();
    s.max = sorted.back();
    return s;
}

}  // namespace relsim
