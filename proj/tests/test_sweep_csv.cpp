#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "relsim/cli.hpp"
#include "relsim/config.hpp"
#include "relsim/csv.hpp"
#include "relsim/sweep.hpp"

using namespace relsim;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per test process; removed and recreated so stale
// files from an aborted run cannot leak into assertions.
fs::path scratch_dir() {
    fs::path dir = fs::temp_directory_path() / "relsim_sweep_csv_tests";
    std::error_code ec;
    fs::remove_all(dir, ec);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    return n;
}

// Swallows std::cout/std::cerr for the CLI tests so usage text and metric
// dumps do not clutter the test log.
struct CaptureOutput {
    std::ostringstream out, err;
    std::streambuf* old_out;
    std::streambuf* old_err;
    CaptureOutput()
        : old_out(std::cout.rdbuf(out.rdbuf())), old_err(std::cerr.rdbuf(err.rdbuf())) {}
    ~CaptureOutput() {
        std::cout.rdbuf(old_out);
        std::cerr.rdbuf(old_err);
    }
};

SimParams fast_base() {
    SimParams p;
    p.job_size = 4;
    p.working_pool_size = 12;
    p.spare_pool_size = 4;
    p.warm_standbys = 2;
    p.random_failure_rate = 1e-3;
    p.systematic_failure_fraction = 0.25;
    p.systematic_rate_multiplier = 6.0;
    p.job_length = 500.0;
    p.recovery_time = 10.0;
    p.host_selection_time = 3.0;
    p.auto_repair_time = 60.0;
    p.manual_repair_time = 240.0;
    return p;
}

const char* kNoFailureConfig =
    "random_failure_rate = 0\n"
    "job_size = 4\n"
    "working_pool_size = 8\n"
    "spare_pool_size = 4\n"
    "warm_standbys = 2\n"
    "job_length = 1000\n"
    "host_selection_time = 3\n"
    "recovery_time = 10\n";

const std::string kSummaryHeader =
    "recovery_time,"
    "total_time_mean,total_time_median,total_time_stddev,total_time_p50,total_time_p90,"
    "total_time_p95,total_time_p99,total_time_min,total_time_max,"
    "failures_total_mean,failures_total_median,failures_total_stddev,failures_total_p50,"
    "failures_total_p90,failures_total_p95,failures_total_p99,failures_total_min,"
    "failures_total_max,"
    "failures_random_mean,failures_random_median,failures_random_stddev,failures_random_p50,"
    "failures_random_p90,failures_random_p95,failures_random_p99,failures_random_min,"
    "failures_random_max,"
    "failures_systematic_mean,failures_systematic_median,failures_systematic_stddev,"
    "failures_systematic_p50,failures_systematic_p90,failures_systematic_p95,"
    "failures_systematic_p99,failures_systematic_min,failures_systematic_max,"
    "preemptions_mean,preemptions_median,preemptions_stddev,preemptions_p50,preemptions_p90,"
    "preemptions_p95,preemptions_p99,preemptions_min,preemptions_max,"
    "auto_repairs_mean,auto_repairs_median,auto_repairs_stddev,auto_repairs_p50,auto_repairs_p90,"
    "auto_repairs_p95,auto_repairs_p99,auto_repairs_min,auto_repairs_max,"
    "manual_repairs_mean,manual_repairs_median,manual_repairs_stddev,manual_repairs_p50,"
    "manual_repairs_p90,manual_repairs_p95,manual_repairs_p99,manual_repairs_min,"
    "manual_repairs_max,"
    "avg_run_duration_mean,avg_run_duration_median,avg_run_duration_stddev,avg_run_duration_p50,"
    "avg_run_duration_p90,avg_run_duration_p95,avg_run_duration_p99,avg_run_duration_min,"
    "avg_run_duration_max,"
    "stalls_mean,stalls_median,stalls_stddev,stalls_p50,stalls_p90,stalls_p95,stalls_p99,"
    "stalls_min,stalls_max\n";

const std::string kRawHeader =
    "recovery_time,replication,total_time,failures_total,failures_random,failures_systematic,"
    "preemptions,auto_repairs,manual_repairs,avg_run_duration,stalls\n";

// Deterministic two-cell sweep over recovery_time with all failures switched
// off; every metric collapses to a constant, so full CSV rows are predictable.
SweepResult no_failure_sweep() {
    SimParams base = parse_config(kNoFailureConfig);
    SweepSpec spec;
    spec.name = "recovery_time";
    spec.axes = {{"recovery_time", {10.0, 20.0}}};
    spec.replications = 2;
    spec.base_seed = 4;
    return run_sweep(spec, base);
}

}  // namespace

TEST_CASE("two-way sweeps enumerate cells row-major") {
    SimParams base = fast_base();
    SweepSpec spec;
    spec.axes = {{"recovery_time", {5.0, 15.0}}, {"warm_standbys", {0.0, 2.0, 4.0}}};
    spec.replications = 2;
    spec.base_seed = 21;

    CHECK(cell_count(spec) == 6);
    SweepResult result = run_sweep(spec, base);
    REQUIRE(result.cells.size() == 6);

    for (std::size_t i = 0; i < 6; ++i) {
        const SweepCellResult& cell = result.cells[i];
        REQUIRE(cell.param_values.size() == 2);
        CHECK(cell.param_values[0] == spec.axes[0].values[i / 3]);
        CHECK(cell.param_values[1] == spec.axes[1].values[i % 3]);
        CHECK(cell.runs.size() == 2);
        CHECK(cell.metric_stats.size() == run_metrics().size());
        for (const StatsSummary& s : cell.metric_stats) CHECK(s.count == 2);
    }
}

TEST_CASE("a sweep cell reproduces plain runs with the derived seed") {
    SimParams base = fast_base();
    SweepSpec spec;
    spec.axes = {{"recovery_time", {25.0}}};
    spec.replications = 3;
    spec.base_seed = 9;

    SweepResult result = run_sweep(spec, base);
    REQUIRE(result.cells.size() == 1);
    const SweepCellResult& cell = result.cells[0];
    REQUIRE(cell.runs.size() == 3);

    SimParams expected = base;
    expected.recovery_time = 25.0;
    std::uint64_t seed = derive_cell_seed(9, 0);
    for (std::uint64_t rep = 0; rep < 3; ++rep) {
        CHECK(cell.runs[rep] == run_simulation(expected, seed, rep));
    }
}

TEST_CASE("cells can run in any order without changing results") {
    SimParams base = fast_base();
    SweepSpec spec;
    spec.axes = {{"recovery_time", {5.0, 15.0}}, {"job_length", {300.0, 600.0}}};
    spec.replications = 2;
    spec.base_seed = 13;

    SweepResult forward = run_sweep(spec, base);
    REQUIRE(forward.cells.size() == 4);
    for (std::size_t i = forward.cells.size(); i-- > 0;) {
        SweepCellResult alone = run_cell(spec, base, i);
        CHECK(alone.param_values == forward.cells[i].param_values);
        CHECK(alone.runs == forward.cells[i].runs);
    }
}

TEST_CASE("cell seeds depend on index and base seed only") {
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < 100; ++i) {
        seen.insert(derive_cell_seed(7, i));
    }
    CHECK(seen.size() == 100);
    CHECK(derive_cell_seed(7, 3) == derive_cell_seed(7, 3));
    CHECK(derive_cell_seed(7, 3) != derive_cell_seed(8, 3));
}

TEST_CASE("bad sweep specs fail before any simulation runs") {
    SimParams base = fast_base();

    SweepSpec unknown;
    unknown.axes = {{"not_a_parameter", {1.0}}};
    CHECK_THROWS_WITH_AS(run_sweep(unknown, base), doctest::Contains("not_a_parameter"),
                         ConfigError);

    SweepSpec dup;
    dup.axes = {{"recovery_time", {1.0}}, {"recovery_time", {2.0}}};
    CHECK_THROWS_AS(run_sweep(dup, base), ConfigError);

    SweepSpec empty_axis;
    empty_axis.axes = {{"recovery_time", {}}};
    CHECK_THROWS_AS(run_sweep(empty_axis, base), ConfigError);

    SweepSpec no_axes;
    CHECK_THROWS_AS(run_sweep(no_axes, base), ConfigError);

    SweepSpec bad_reps;
    bad_reps.axes = {{"recovery_time", {1.0}}};
    bad_reps.replications = 0;
    CHECK_THROWS_AS(run_sweep(bad_reps, base), ConfigError);

    SweepSpec non_integral;
    non_integral.axes = {{"job_size", {2.5}}};
    CHECK_THROWS_AS(run_sweep(non_integral, base), ConfigError);
}

TEST_CASE("an override that breaks validation names its cell") {
    SimParams base = fast_base();
    SweepSpec spec;
    spec.axes = {{"recovery_time", {5.0, -3.0}}};
    CHECK_THROWS_WITH_AS(run_sweep(spec, base), doctest::Contains("sweep cell 1"), ConfigError);
}

TEST_CASE("summary and raw CSVs carry the pinned schema") {
    SweepResult result = no_failure_sweep();

    std::string summary = render_summary_csv(result);
    std::string raw = render_raw_csv(result);

    // Without failures every replication is identical, so all nine statistics
    // of a metric collapse onto its constant value (stddev excepted, which is
    // zero).
    const std::string zeros = "0,0,0,0,0,0,0,0,0";
    auto flat = [&](const std::string& v) {
        return v + "," + v + ",0," + v + "," + v + "," + v + "," + v + "," + v + "," + v;
    };
    std::string expected_summary = kSummaryHeader;
    expected_summary += "10," + flat("1013") + "," + zeros + "," + zeros + "," + zeros + "," +
                        zeros + "," + zeros + "," + zeros + "," + flat("1000") + "," + zeros + "\n";
    expected_summary += "20," + flat("1023") + "," + zeros + "," + zeros + "," + zeros + "," +
                        zeros + "," + zeros + "," + zeros + "," + flat("1000") + "," + zeros + "\n";
    CHECK(summary == expected_summary);

    std::string expected_raw = kRawHeader;
    expected_raw += "10,0,1013,0,0,0,0,0,0,1000,0\n";
    expected_raw += "10,1,1013,0,0,0,0,0,0,1000,0\n";
    expected_raw += "20,0,1023,0,0,0,0,0,0,1000,0\n";
    expected_raw += "20,1,1023,0,0,0,0,0,0,1000,0\n";
    CHECK(raw == expected_raw);

    CHECK(render_summary_csv(result) == summary);
    CHECK(render_raw_csv(result) == raw);
}

TEST_CASE("CSV shape follows cells and replications") {
    SimParams base = fast_base();
    SweepSpec spec;
    spec.axes = {{"recovery_time", {5.0, 10.0, 15.0}}};
    spec.replications = 4;
    spec.base_seed = 2;

    SweepResult result = run_sweep(spec, base);
    CHECK(line_count(render_summary_csv(result)) == 1 + 3);
    CHECK(line_count(render_raw_csv(result)) == 1 + 3 * 4);
}

TEST_CASE("raw sidecar path replaces the .csv suffix when present") {
    CHECK(raw_csv_path("out.csv") == "out.raw.csv");
    CHECK(raw_csv_path("dir/results.csv") == "dir/results.raw.csv");
    CHECK(raw_csv_path("plain") == "plain.raw.csv");
    CHECK(raw_csv_path(".csv") == ".csv.raw.csv");
}

TEST_CASE("write_results lands both files with the rendered bytes") {
    fs::path dir = scratch_dir();
    SweepResult result = no_failure_sweep();
    std::string out = (dir / "sweep.csv").string();

    write_results(result, out);
    CHECK(slurp(out) == render_summary_csv(result));
    CHECK(slurp(dir / "sweep.raw.csv") == render_raw_csv(result));
    CHECK_FALSE(fs::exists(dir / "sweep.csv.tmp"));
}

TEST_CASE("write_results reports unwritable destinations") {
    fs::path dir = scratch_dir();
    fs::path blocker = dir / "not_a_directory";
    std::ofstream(blocker) << "occupied";

    SweepResult result = no_failure_sweep();
    std::string out = (blocker / "sweep.csv").string();
    CHECK_THROWS_AS(write_results(result, out), std::runtime_error);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("command line: run prints metrics and honours exit codes") {
    fs::path dir = scratch_dir();
    fs::path cfg = dir / "job.cfg";
    std::ofstream(cfg) << kNoFailureConfig;

    {
        CaptureOutput cap;
        CHECK(run_cli({"run", "--config", cfg.string()}) == 0);
        CHECK(cap.out.str().find("total_time = 1013") != std::string::npos);
        CHECK(cap.out.str().find("avg_run_duration = 1000") != std::string::npos);
        CHECK(cap.out.str().find("stalls = 0") != std::string::npos);
    }
    {
        CaptureOutput cap;
        CHECK(run_cli({"run", "--config", cfg.string(), "--seed", "99"}) == 0);
    }
    {
        CaptureOutput cap;
        CHECK(run_cli({}) != 0);
        CHECK(run_cli({"run"}) != 0);
        CHECK(run_cli({"bogus"}) != 0);
        CHECK(run_cli({"run", "--config", (dir / "missing.cfg").string()}) != 0);
        CHECK(run_cli({"run", "--config", cfg.string(), "--seed", "abc"}) != 0);
    }
}

TEST_CASE("command line: sweep writes the CSV pair") {
    fs::path dir = scratch_dir();
    fs::path cfg = dir / "job.cfg";
    std::ofstream(cfg) << kNoFailureConfig;
    fs::path out = dir / "result.csv";

    {
        CaptureOutput cap;
        CHECK(run_cli({"sweep", "--config", cfg.string(), "--param", "recovery_time", "--values",
                       "10,20", "--replications", "2", "--seed", "4", "--out", out.string()}) == 0);
    }
    CHECK(slurp(out) == render_summary_csv(no_failure_sweep()));
    CHECK(slurp(dir / "result.raw.csv") == render_raw_csv(no_failure_sweep()));

    // A second --param/--values pair turns the same command into a grid.
    fs::path out2 = dir / "grid.csv";
    {
        CaptureOutput cap;
        CHECK(run_cli({"sweep", "--config", cfg.string(), "--param", "recovery_time", "--values",
                       "10,20", "--param", "waiting_time", "--values", "5,15", "--replications",
                       "2", "--seed", "4", "--out", out2.string()}) == 0);
        CHECK(cap.out.str().find("4 cells x 2 replications") != std::string::npos);
    }
    SweepSpec grid;
    grid.name = "recovery_time x waiting_time";
    grid.axes.push_back({"recovery_time", {10.0, 20.0}});
    grid.axes.push_back({"waiting_time", {5.0, 15.0}});
    grid.replications = 2;
    grid.base_seed = 4;
    SweepResult grid_result = run_sweep(grid, parse_config_file(cfg.string()));
    CHECK(slurp(out2) == render_summary_csv(grid_result));
    CHECK(slurp(dir / "grid.raw.csv") == render_raw_csv(grid_result));

    {
        CaptureOutput cap;
        CHECK(run_cli({"sweep", "--config", cfg.string(), "--out", out.string()}) != 0);
        CHECK(run_cli({"sweep", "--config", cfg.string(), "--param", "recovery_time", "--param",
                       "waiting_time", "--values", "10,20", "--out", out.string()}) != 0);
        CHECK(run_cli({"sweep", "--config", cfg.string(), "--param", "recovery_time", "--values",
                       "10,,20", "--out", out.string()}) != 0);
        CHECK(run_cli({"sweep", "--config", cfg.string(), "--param", "nope", "--values", "1",
                       "--out", out.string()}) != 0);
    }
}
