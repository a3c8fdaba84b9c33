#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cfpath/cf.hpp"
#include "cfpath/cli.hpp"
#include "cfpath/eval.hpp"
#include "cfpath/tasks.hpp"
#include "support.hpp"

using namespace cfpath;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) {
            files[fs::relative(e.path(), dir).generic_string()] = slurp(e.path());
        }
    }
    return files;
}

std::size_t count_lines(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

// maps/perlin and maps/prim_maze plus a task file next to them
void make_benchmark(const testing::TempDir& dir, const std::string& jobs = "1") {
    for (const std::string topo : {"perlin", "prim_maze"}) {
        REQUIRE(cli({"gen-upf", "--topology", topo, "--count", "3", "--seed", "11", "--out-dir",
                     dir / ("maps/" + topo), "--jobs", jobs})
                    .code == 0);
    }
    const auto r = cli({"gen-tasks", "--maps-dir", dir / "maps", "--per-map", "2", "--seed", "5", "--out",
                        dir / "tasks.csv", "--jobs", jobs});
    REQUIRE(r.code == 0);
    CHECK(r.err.find("rejected: diversity=") != std::string::npos);
}

} // namespace

TEST_CASE("help, version and usage errors") {
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"gen-upf", "--help"}).code == 0);
    const auto v = cli({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find(kToolVersion) != std::string::npos);
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);

    testing::TempDir dir("cli_usage");
    const auto missing = cli({"gen-upf", "--topology", "perlin", "--count", "1", "--out-dir", dir / "m"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("--seed") != std::string::npos);
    CHECK(cli({"gen-upf", "--topology", "voronoi", "--count", "1", "--seed", "1", "--out-dir", dir / "m"}).code ==
          2);
    CHECK(cli({"solve", "--tasks", dir / "none.csv", "--solver", "astar", "--out", dir / "r.csv"}).code == 2);
    CHECK(cli({"gen-train", "--kind", "uniform", "--count", "1", "--seed", "1", "--p", "2", "--out-dir",
               dir / "t"})
              .code == 2);
}

TEST_CASE("generators write maps and a manifest") {
    testing::TempDir dir("cli_gen");
    const auto r = cli({"gen-upf", "--topology", "recursive_division", "--count", "3", "--seed", "2", "--out-dir",
                        dir / "rd"});
    REQUIRE(r.code == 0);
    for (int i = 0; i < 3; ++i) {
        const std::string name = "rd/map_00000" + std::to_string(i) + ".map";
        CHECK(load_map(dir / name).width() == 64);
    }
    const auto manifest = slurp(dir / "rd/manifest.json");
    CHECK(manifest.find("\"command\": \"gen-upf\"") != std::string::npos);
    CHECK(manifest.find("\"seed\"") != std::string::npos);

    REQUIRE(cli({"gen-train", "--kind", "beta_figures", "--count", "2", "--size", "32", "--seed", "9",
                 "--out-dir", dir / "train"})
                .code == 0);
    CHECK(load_map(dir / "train/map_000001.map").height() == 32);
}

TEST_CASE("reruns and worker counts give identical bytes") {
    testing::TempDir dir("cli_det");
    make_benchmark(dir, "1");
    const auto first = snapshot(dir.path);
    CHECK(first.count("tasks.csv") == 1);
    CHECK(first.count("tasks.manifest.json") == 1);
    for (const std::string jobs : {"1", "4"}) {
        fs::remove_all(dir.path);
        fs::create_directories(dir.path);
        make_benchmark(dir, jobs);
        CHECK(snapshot(dir.path) == first);
    }
}

TEST_CASE("compute-cf on an empty map") {
    testing::TempDir dir("cli_cf");
    fs::create_directories(dir.path / "maps");
    save_map(dir / "maps/empty.map", Grid(16, 16));
    const std::vector<TaskRecord> tasks{
        {"maps/empty.map", {0, 0}, {9, 4}, octile({0, 0}, {9, 4}), 0, 0},
        {"maps/empty.map", {3, 3}, {15, 15}, octile({3, 3}, {15, 15}), 0, 0},
    };
    save_tasks(dir / "tasks.csv", tasks);
    REQUIRE(cli({"compute-cf", "--tasks", dir / "tasks.csv", "--out-dir", dir / "cf"}).code == 0);
    std::size_t cfm = 0;
    for (const auto& e : fs::directory_iterator(dir.path / "cf")) {
        cfm += e.path().extension() == ".cfm" ? 1 : 0;
    }
    CHECK(cfm == tasks.size());
    const CfField f = read_cf(dir / "cf/task_000000.cfm");
    for (const double v : f.values()) {
        CHECK(v == 1.0);
    }
    CHECK_FALSE(f.masked_in({9, 4}));
    CHECK(f.masked_in({0, 0}));
}

TEST_CASE("solve, report and runtime") {
    testing::TempDir dir("cli_pipeline");
    make_benchmark(dir);
    const auto tasks = load_tasks(dir / "tasks.csv");
    REQUIRE(tasks.size() >= 4);

    REQUIRE(cli({"solve", "--tasks", dir / "tasks.csv", "--solver", "astar", "--out", dir / "astar.csv"}).code == 0);
    REQUIRE(cli({"solve", "--tasks", dir / "tasks.csv", "--solver", "wastar:5", "--out", dir / "w5.csv"}).code ==
            0);
    REQUIRE(cli({"compute-cf", "--tasks", dir / "tasks.csv", "--out-dir", dir / "cf", "--jobs", "3"}).code == 0);
    REQUIRE(cli({"solve", "--tasks", dir / "tasks.csv", "--solver", "cf:file", "--cf-dir", dir / "cf", "--out",
                 dir / "cf.csv"})
                .code == 0);
    const auto astar = load_runs(dir / "astar.csv");
    const auto cf = load_runs(dir / "cf.csv");
    REQUIRE(astar.size() == tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        CHECK(astar[i].cost == doctest::Approx(tasks[i].optimal_cost).epsilon(1e-8));
        CHECK(cf[i].cost == doctest::Approx(tasks[i].optimal_cost).epsilon(1e-8));
        CHECK(cf[i].expansions <= astar[i].expansions);
    }

    SUBCASE("report") {
        const auto r = cli({"report", "--runs", dir / "astar.csv", "--runs", "w5=" + (dir / "w5.csv"), "--baseline",
                            dir / "astar.csv", "--tasks", dir / "tasks.csv", "--lambdas", "0,0.5,1", "--out-dir",
                            dir / "report"});
        REQUIRE(r.code == 0);
        CHECK(r.out.find("| astar | 100.00 | 100.0 | 100.0 |") != std::string::npos);
        CHECK(r.out.find("| w5 |") != std::string::npos);
        const std::string sweep = slurp(dir.path / "report/lambda_sweep.csv");
        CHECK(sweep.substr(0, sweep.find('\n')) == "solver,lambda=0.0000,lambda=0.5000,lambda=1.0000");
        // header plus one row per solver and topology
        CHECK(count_lines(slurp(dir.path / "report/per_topology.csv")) == 1 + 2 * 2);
        CHECK(count_lines(slurp(dir.path / "report/summary.csv")) == 3);
        for (const char* f : {"crossovers.csv", "table.md", "tradeoff.svg", "metadata.json"}) {
            CHECK(fs::exists(dir.path / "report" / f));
        }
        CHECK(cli({"report", "--runs", dir / "w5.csv", "--baseline", dir / "astar.csv", "--tasks", dir / "tasks.csv",
                   "--lambdas", "0,2", "--out-dir", dir / "bad"})
                  .code == 2);
    }

    SUBCASE("mismatched task sets are refused") {
        auto partial = load_runs(dir / "w5.csv");
        partial.pop_back();
        save_runs(dir / "partial.csv", partial);
        const auto r = cli({"report", "--runs", dir / "partial.csv", "--baseline", dir / "astar.csv", "--tasks",
                            dir / "tasks.csv", "--out-dir", dir / "report2"});
        CHECK(r.code == 1);
        CHECK(r.err.find("missing ids") != std::string::npos);
    }

    SUBCASE("missing cf file") {
        fs::remove(dir.path / "cf/task_000000.cfm");
        const auto r = cli({"solve", "--tasks", dir / "tasks.csv", "--solver", "cf:file", "--cf-dir", dir / "cf",
                            "--out", dir / "cf2.csv"});
        CHECK(r.code == 1);
        const auto runs = load_runs(dir / "cf2.csv");
        REQUIRE(runs.size() == tasks.size());
        CHECK_FALSE(runs[0].found);
        CHECK(runs[0].status.rfind("error:", 0) == 0);
        CHECK(runs[1].status == "ok");
        CHECK(cli({"solve", "--tasks", dir / "tasks.csv", "--solver", "cf:file", "--out", dir / "cf3.csv"}).code ==
              2);
    }

    SUBCASE("runtime table") {
        {
            std::ofstream t(dir / "timing.csv");
            t << "task_id,batch_id,seconds\n0,0,0.5\n1,0,0.5\n2,1,0.25\n";
        }
        REQUIRE(cli({"runtime", "--tasks", dir / "tasks.csv", "--solver", "astar", "--batch-sizes", "1,2", "--out",
                     dir / "rt.csv"})
                    .code == 0);
        REQUIRE(cli({"runtime", "--tasks", dir / "tasks.csv", "--solver", "cf:file", "--cf-dir", dir / "cf",
                     "--batch-sizes", "1,2", "--timing", "2=" + (dir / "timing.csv"), "--out", dir / "rt.csv"})
                    .code == 0);
        const auto rows = parse_runtime_csv(slurp(dir.path / "rt.csv"));
        REQUIRE(rows.size() == 4);
        CHECK(rows[0].predict_seconds == 0.0);
        CHECK(rows[0].search_seconds == rows[1].search_seconds);
        CHECK(rows[2].solver == "cf:file");
        CHECK(rows[3].predict_seconds >= 0.75);
        for (const auto& row : rows) {
            CHECK(row.total_seconds == doctest::Approx(row.predict_seconds + row.search_seconds));
        }
        REQUIRE(cli({"report", "--runs", dir / "cf.csv", "--baseline", dir / "astar.csv", "--tasks",
                     dir / "tasks.csv", "--runtime", dir / "rt.csv", "--out-dir", dir / "report3"})
                    .code == 0);
        CHECK(fs::exists(dir.path / "report3/runtime.svg"));
    }
}

TEST_CASE("ingest from a source directory") {
    testing::TempDir dir("cli_ingest");
    fs::create_directories(dir.path / "src");
    for (int i = 0; i < 3; ++i) {
        save_map(dir / ("src/tmp_" + std::to_string(i) + ".map"), testing::random_grid(64, 64, 0.3, 40 + i));
    }
    const std::vector<std::string> args{"ingest", "--kind", "tmp", "--src-dir", dir / "src", "--count", "3",
                                        "--seed", "4", "--out-dir"};
    auto first = args, second = args;
    first.push_back(dir / "out1");
    second.push_back(dir / "out2");
    REQUIRE(cli(first).code == 0);
    REQUIRE(cli(second).code == 0);
    CHECK(snapshot(dir.path / "out1").size() == 4);
    // manifests record the output directory, maps must match exactly
    for (int i = 0; i < 3; ++i) {
        const std::string name = "map_00000" + std::to_string(i) + ".map";
        CHECK(slurp(dir.path / "out1" / name) == slurp(dir.path / "out2" / name));
    }
    auto too_many = args;
    too_many[6] = "4";
    too_many.push_back(dir / "out3");
    CHECK(cli(too_many).code == 2);
}
