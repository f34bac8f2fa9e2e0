#include "relsim/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "relsim/config.hpp"

namespace relsim {

namespace {

constexpr const char* kStatNames[] = {"mean", "median", "stddev", "p50", "p90",
                                      "p95",  "p99",    "min",    "max"};

double stat_value(const StatsSummary& s, std::size_t which) {
    switch (which) {
        case 0: return s.mean;
        case 1: return s.median;
        case 2: return s.stddev;
        case 3: return s.p50;
        case 4: return s.p90;
        case 5: return s.p95;
        case 6: return s.p99;
        case 7: return s.min;
        default: return s.max;
    }
}

void write_file_atomically(const std::string& path, const std::string& bytes) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";

    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("failed while writing '" + tmp.string() + "'");
        }
    }

    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::error_code ec2;
        std::filesystem::remove(tmp, ec2);
        throw std::runtime_error("cannot move results into place at '" + path + "': " + ec.message());
    }
}

}  // namespace

std::string raw_csv_path(const std::string& path) {
    constexpr std::string_view suffix = ".csv";
    if (path.size() > suffix.size() && path.ends_with(suffix)) {
        return path.substr(0, path.size() - suffix.size()) + ".raw.csv";
    }
    return path + ".raw.csv";
}

std::string render_summary_csv(const SweepResult& result) {
    std::string out;
    for (const SweepAxis& axis : result.spec.axes) {
        out += axis.key;
        out += ',';
    }
    bool first = true;
    for (const MetricDef& metric : run_metrics()) {
        for (const char* stat : kStatNames) {
            if (!first) out += ',';
            first = false;
            out += metric.name;
            out += '_';
            out += stat;
        }
    }
    out += '\n';

    for (const SweepCellResult& cell : result.cells) {
        for (double v : cell.param_values) {
            out += format_number(v);
            out += ',';
        }
        first = true;
        for (const StatsSummary& stats : cell.metric_stats) {
            for (std::size_t s = 0; s < std::size(kStatNames); ++s) {
                if (!first) out += ',';
                first = false;
                out += format_number(stat_value(stats, s));
            }
        }
        out += '\n';
    }
    return out;
}

std::string render_raw_csv(const SweepResult& result) {
    std::string out;
    for (const SweepAxis& axis : result.spec.axes) {
        out += axis.key;
        out += ',';
    }
    out += "replication";
    for (const MetricDef& metric : run_metrics()) {
        out += ',';
        out += metric.name;
    }
    out += '\n';

    for (const SweepCellResult& cell : result.cells) {
        for (std::size_t rep = 0; rep < cell.runs.size(); ++rep) {
            for (double v : cell.param_values) {
                out += format_number(v);
                out += ',';
            }
            out += std::to_string(rep);
            for (const MetricDef& metric : run_metrics()) {
                out += ',';
                out += format_number(metric.get(cell.runs[rep]));
            }
            out += '\n';
        }
    }
    return out;
}

void write_results(const SweepResult& result, const std::string& path) {
    write_file_atomically(path, render_summary_csv(result));
    write_file_atomically(raw_csv_path(path), render_raw_csv(result));
}

}  // namespace relsim
