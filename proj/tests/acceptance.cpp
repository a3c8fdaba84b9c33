// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cfpath/cf.hpp"
#include "cfpath/cli.hpp"
#include "cfpath/eval.hpp"
#include "cfpath/gen_train.hpp"
#include "cfpath/gen_upf.hpp"
#include "cfpath/parallel.hpp"
#include "cfpath/search.hpp"
#include "cfpath/tasks.hpp"

using namespace cfpath;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int jobs() {
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

struct Instance {
    Grid grid;
    Cell start;
    Cell goal;
};

// Goal uniform over free cells, start uniform over cells that reach it.
std::optional<Instance> reachable_pair(const Grid& grid, Rng& rng) {
    std::vector<Cell> free;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!grid.blocked(i)) {
            free.push_back(grid.cell(i));
        }
    }
    if (free.empty()) {
        return std::nullopt;
    }
    const Cell goal = free[rng.below(free.size())];
    const CostField field = dijkstra_field(grid, goal);
    std::vector<Cell> reach;
    for (const Cell c : free) {
        if (field.reachable(c)) {
            reach.push_back(c);
        }
    }
    return Instance{grid, reach[rng.below(reach.size())], goal};
}

Instance beta_instance(std::uint64_t seed) {
    GenSpec spec;
    spec.kind = TrainKind::beta;
    for (std::uint64_t k = 0;; ++k) {
        spec.seed = seed + k * 1000003;
        Rng rng(spec.seed ^ 0x5eedull);
        if (auto inst = reachable_pair(generate(spec), rng)) {
            return *inst;
        }
    }
}

// --- criteria ----------------------------------------------------------------

Outcome oracle_equivalence() {
    const auto t0 = Clock::now();
    const std::size_t n = 500;
    std::vector<char> ok(n, 0);
    parallel_for(n, jobs(), [&](std::size_t i) {
        const Instance inst = beta_instance(i);
        const double expect = dijkstra_field(inst.grid, inst.goal).at(inst.start);
        const auto r = astar(inst.grid, inst.start, inst.goal, octile_heuristic(inst.goal));
        ok[i] = r.found && std::abs(r.cost - expect) <= 1e-9;
    });
    const auto agree = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
    const double secs = seconds_since(t0);
    return {agree == n && secs < 60.0, fmt("%zu/%zu instances agree within 1e-9, %.2fs (limit 60s)", agree, n, secs)};
}

Outcome perfect_heuristic() {
    const auto t0 = Clock::now();
    const std::size_t n = 500;
    std::vector<char> optimal(n, 0), bounded(n, 0);
    parallel_for(n, jobs(), [&](std::size_t i) {
        const Instance inst = beta_instance(100000 + i);
        const CostField field = dijkstra_field(inst.grid, inst.goal);
        const CfField cf = cf_target(inst.grid, inst.goal, field);
        const auto perfect = astar(inst.grid, inst.start, inst.goal, h_from_cf(cf, inst.grid, inst.goal));
        const auto base = astar(inst.grid, inst.start, inst.goal, octile_heuristic(inst.goal));
        optimal[i] = perfect.found && std::abs(perfect.cost - field.at(inst.start)) <= 1e-9;
        bounded[i] = perfect.expansions <= base.expansions + perfect.path.size();
    });
    const auto o = static_cast<std::size_t>(std::count(optimal.begin(), optimal.end(), 1));
    const auto b = static_cast<std::size_t>(std::count(bounded.begin(), bounded.end(), 1));
    const double secs = seconds_since(t0);
    return {o == n && b == n && secs < 60.0,
            fmt("optimal %zu/%zu, expansions within octile bound %zu/%zu, %.2fs (limit 60s)", o, n, b, n, secs)};
}

Outcome weighted_bound() {
    const auto& topologies = all_topologies();
    const std::size_t n = 2000;
    const double weights[3] = {2.0, 5.0, 10.0};
    std::vector<std::array<char, 3>> ok(n);
    parallel_for(n, jobs(), [&](std::size_t i) {
        UpfSpec spec;
        spec.topology = topologies[i % topologies.size()];
        spec.seed = 7000 + i;
        Rng rng(i);
        const auto inst = reachable_pair(generate(spec), rng);
        for (std::size_t k = 0; k < 3; ++k) {
            if (!inst) {
                ok[i][k] = 0;
                continue;
            }
            const double optimal = dijkstra_field(inst->grid, inst->goal).at(inst->start);
            const auto r = astar(inst->grid, inst->start, inst->goal, octile_heuristic(inst->goal), weights[k]);
            ok[i][k] = r.found && r.cost <= weights[k] * optimal + 1e-9;
        }
    });
    std::string detail;
    bool pass = true;
    for (std::size_t k = 0; k < 3; ++k) {
        std::size_t good = 0;
        for (const auto& row : ok) {
            good += row[k] ? 1 : 0;
        }
        pass = pass && good == n;
        detail += fmt("%sw=%g %zu/%zu", k ? ", " : "", weights[k], good, n);
    }
    return {pass, detail + " within w * optimal"};
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
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

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("cfpath_accept_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Outcome baseline_identity() {
    const fs::path dir = scratch("identity");
    const std::string j = std::to_string(jobs());
    for (const Topology t : all_topologies()) {
        const auto r = cli({"gen-upf", "--topology", to_string(t), "--count", "4", "--seed", "3", "--out-dir",
                            (dir / "maps" / to_string(t)).string()});
        if (r.code != 0) {
            return {false, "gen-upf failed: " + r.err};
        }
    }
    const std::string tasks = (dir / "tasks.csv").string();
    const std::string runs = (dir / "astar.csv").string();
    if (cli({"gen-tasks", "--maps-dir", (dir / "maps").string(), "--per-map", "5", "--seed", "1", "--out", tasks,
             "--jobs", j})
                .code != 0 ||
        cli({"solve", "--tasks", tasks, "--solver", "astar", "--out", runs, "--jobs", j}).code != 0) {
        return {false, "could not produce the baseline run"};
    }
    const auto r = cli({"report", "--runs", runs, "--baseline", runs, "--tasks", tasks, "--out-dir",
                        (dir / "report").string()});
    const std::string row = "| astar | 100.00 | 100.0 | 100.0 |";
    const std::string summary = slurp(dir / "report" / "summary.csv");
    const bool csv_exact = summary.find("astar,all,") != std::string::npos &&
                           summary.find(",100.000000,100.000000,0.000000,100.000000,0.000000\n") != std::string::npos;
    const bool pass = r.code == 0 && r.out.find(row) != std::string::npos && csv_exact;
    fs::remove_all(dir);
    return {pass, fmt("report exit %d, table row %s, summary.csv exact %s", r.code,
                      r.out.find(row) != std::string::npos ? "matches" : "differs", csv_exact ? "yes" : "no")};
}

Outcome filter_compliance() {
    const auto t0 = Clock::now();
    const fs::path dir = scratch("filters");
    const std::string j = std::to_string(jobs());
    // 6 topologies x 85 maps x 20 tasks = 10,200 requested
    for (const Topology t : all_topologies()) {
        const auto r = cli({"gen-upf", "--topology", to_string(t), "--count", "85", "--seed", "500", "--out-dir",
                            (dir / "maps" / to_string(t)).string(), "--jobs", j});
        if (r.code != 0) {
            return {false, "gen-upf failed: " + r.err};
        }
    }
    const auto gen = cli({"gen-tasks", "--maps-dir", (dir / "maps").string(), "--per-map", "20", "--seed", "77",
                          "--out", (dir / "tasks.csv").string(), "--jobs", j});
    if (gen.code != 0) {
        return {false, "gen-tasks failed: " + gen.err};
    }
    std::string counters = gen.err.substr(0, gen.err.find('\n'));

    const auto tasks = load_tasks((dir / "tasks.csv").string());
    std::map<std::string, Grid> maps;
    for (const auto& t : tasks) {
        if (!maps.count(t.map_path)) {
            maps.emplace(t.map_path, load_map((dir / t.map_path).string()));
        }
    }
    std::vector<char> ok(tasks.size(), 0);
    parallel_for(tasks.size(), jobs(), [&](std::size_t i) {
        const auto& t = tasks[i];
        const Grid& g = maps.at(t.map_path);
        const CostField field = dijkstra_field(g, t.goal);
        const double cost = field.at(t.start);
        ok[i] = cost != kInfinity && std::abs(cost - t.optimal_cost) <= 1e-6 &&
                cost >= 1.05 * octile(t.start, t.goal) && reachability_diversity(field) >= kDefaultHMin;
    });
    const auto good = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
    fs::remove_all(dir);
    const bool pass = tasks.size() >= 10000 && good == tasks.size();
    return {pass, fmt("%zu/%zu emitted tasks satisfy cost >= 1.05*octile and H >= %g; %s; %.1fs", good,
                      tasks.size(), kDefaultHMin, counters.c_str(), seconds_since(t0))};
}

bool four_connected(const Grid& g) {
    std::vector<char> seen(g.size(), 0);
    std::vector<Cell> stack;
    std::size_t reached = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!g.blocked(i)) {
            stack.push_back(g.cell(i));
            seen[i] = 1;
            break;
        }
    }
    while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        ++reached;
        const Cell adj[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
        for (const Cell n : adj) {
            if (g.in_bounds(n) && !g.blocked(n) && !seen[g.index(n)]) {
                seen[g.index(n)] = 1;
                stack.push_back(n);
            }
        }
    }
    return reached == g.free_count();
}

bool mirrored(const Grid& g) {
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            const bool b = g.blocked(Cell{x, y});
            if (b != g.blocked(Cell{g.width() - 1 - x, y}) || b != g.blocked(Cell{x, g.height() - 1 - y})) {
                return false;
            }
        }
    }
    return true;
}

Outcome generator_statistics() {
    const auto t0 = Clock::now();
    std::vector<std::string> parts;
    bool pass = true;
    auto note = [&](bool ok, const std::string& text) {
        pass = pass && ok;
        parts.push_back(text + (ok ? "" : " [out of tolerance]"));
    };

    {
        std::vector<double> frac(1000);
        parallel_for(frac.size(), jobs(), [&](std::size_t i) {
            GenSpec s;
            s.kind = TrainKind::uniform;
            s.seed = i;
            frac[i] = static_cast<double>(generate(s).blocked_count()) / 4096.0;
        });
        const double m = mean_std(frac).mean;
        note(std::abs(m - 0.5) <= 0.01, fmt("uniform blocked %.4f (0.5+-0.01)", m));
    }
    {
        std::vector<double> dens(10000);
        parallel_for(dens.size(), jobs(), [&](std::size_t i) {
            GenSpec s;
            s.kind = TrainKind::beta;
            s.seed = i;
            dens[i] = static_cast<double>(generate(s).blocked_count()) / 4096.0;
        });
        const double sd = mean_std(dens).std;
        note(std::abs(sd * sd - 0.05) <= 0.01, fmt("beta density variance %.4f (0.05+-0.01)", sd * sd));
    }
    {
        const std::size_t maps = 667; // 15 rings each, 10,005 rings
        std::vector<std::array<int, 4>> hist(maps);
        parallel_for(maps, jobs(), [&](std::size_t i) {
            UpfSpec s;
            s.topology = Topology::masked_pyramid;
            s.seed = i;
            const auto trace = gen_masked_pyramid_traced(s);
            hist[i] = {0, 0, 0, 0};
            for (std::size_t r = 0; r < trace.ring_insets.size(); ++r) {
                const int d = trace.ring_insets[r];
                const int x1 = trace.grid.width() - 1 - d, y1 = trace.grid.height() - 1 - d;
                const Cell corners[4] = {{d, d}, {x1, d}, {x1, y1}, {d, y1}};
                int blocked = 0;
                for (const Cell c : corners) {
                    blocked += trace.grid.blocked(c) ? 1 : 0;
                }
                ++hist[i][static_cast<std::size_t>(std::min(blocked, 3))];
            }
        });
        std::array<double, 4> total{};
        double rings = 0;
        for (const auto& h : hist) {
            for (std::size_t k = 0; k < 4; ++k) {
                total[k] += h[k];
                rings += h[k];
            }
        }
        const double p1 = total[1] / rings, p2 = total[2] / rings, p3 = total[3] / rings;
        note(total[0] == 0 && std::abs(p1 - 0.25) <= 0.02 && std::abs(p2 - 0.5) <= 0.02 && std::abs(p3 - 0.25) <= 0.02,
             fmt("pyramid corners (%.4f, %.4f, %.4f) over %.0f rings", p1, p2, p3, rings));
    }
    {
        std::vector<std::pair<std::size_t, std::size_t>> counts(1000);
        parallel_for(counts.size(), jobs(), [&](std::size_t i) {
            UpfSpec s;
            s.topology = Topology::recursive_division;
            s.seed = i;
            const auto trace = gen_recursive_division_traced(s);
            counts[i] = {trace.flipped_cells, trace.wall_cells};
        });
        double flipped = 0, walls = 0;
        for (const auto& [f, w] : counts) {
            flipped += static_cast<double>(f);
            walls += static_cast<double>(w);
        }
        note(std::abs(flipped / walls - 0.2) <= 0.02, fmt("division flip rate %.4f (0.2+-0.02)", flipped / walls));
    }
    {
        std::vector<char> sym(1000), conn(1000);
        parallel_for(sym.size(), jobs(), [&](std::size_t i) {
            UpfSpec s;
            s.seed = i;
            s.topology = Topology::rotational_symmetry;
            const Grid g = generate(s);
            sym[i] = mirrored(g) && is_mirror_symmetric(g);
            s.topology = Topology::prim_maze;
            conn[i] = four_connected(generate(s));
        });
        const auto a = std::count(sym.begin(), sym.end(), 1);
        const auto b = std::count(conn.begin(), conn.end(), 1);
        note(a == 1000, fmt("mirror symmetric %td/1000", a));
        note(b == 1000, fmt("prim connected %td/1000", b));
    }
    const double secs = seconds_since(t0);
    note(secs < 300.0, fmt("%.1fs (limit 300s)", secs));
    std::string detail;
    for (const auto& p : parts) {
        detail += (detail.empty() ? "" : "; ") + p;
    }
    return {pass, detail};
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

void write_sources(const fs::path& dir) {
    auto random_grid = [](int w, int h, std::uint64_t seed) {
        Rng rng(seed);
        std::vector<std::uint8_t> cells(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
        for (auto& c : cells) {
            c = rng.uniform() < 0.3 ? 1 : 0;
        }
        return Grid(w, h, std::move(cells));
    };
    for (const char* d : {"bg", "street", "house", "tmp"}) {
        fs::create_directories(dir / d);
    }
    for (int i = 0; i < 3; ++i) {
        save_map((dir / "bg" / fmt("bg_%d.map", i)).string(), random_grid(512, 512, 10 + i));
        save_map((dir / "street" / fmt("street_%d.map", i)).string(), random_grid(256, 256, 20 + i));
    }
    for (int i = 0; i < 4; ++i) {
        save_map((dir / "tmp" / fmt("tmp_%d.map", i)).string(), random_grid(64, 64, 30 + i));
        const Grid g = random_grid(60, 60, 40 + i);
        std::ofstream out(dir / "house" / fmt("house_%d.pgm", i), std::ios::binary);
        out << "P5\n60 60\n255\n";
        for (std::size_t k = 0; k < g.size(); ++k) {
            out.put(static_cast<char>(g.blocked(k) ? 0 : 255));
        }
    }
}

Outcome determinism() {
    const fs::path src = scratch("det_src");
    write_sources(src);
    const fs::path out = scratch("det_out");
    const std::string o = out.string();

    std::vector<std::pair<std::string, std::vector<std::string>>> commands;
    for (const char* kind : {"uniform", "beta", "beta_figures"}) {
        commands.push_back({std::string("gen-train ") + kind,
                            {"gen-train", "--kind", kind, "--count", "5", "--seed", "8", "--out-dir",
                             o + "/train/" + kind}});
    }
    for (const Topology t : all_topologies()) {
        commands.push_back({"gen-upf " + to_string(t),
                            {"gen-upf", "--topology", to_string(t), "--count", "5", "--seed", "8", "--out-dir",
                             o + "/maps/" + to_string(t)}});
    }
    const std::pair<const char*, const char*> sources[4] = {
        {"baldurs_gate", "bg"}, {"moving_street", "street"}, {"house_expo", "house"}, {"tmp", "tmp"}};
    for (const auto& [kind, sub] : sources) {
        commands.push_back({std::string("ingest ") + kind,
                            {"ingest", "--kind", kind, "--src-dir", (src / sub).string(), "--count", "4", "--seed",
                             "8", "--out-dir", o + "/maps/" + kind}});
    }
    commands.push_back({"gen-tasks",
                        {"gen-tasks", "--maps-dir", o + "/maps", "--per-map", "3", "--seed", "8", "--out",
                         o + "/tasks.csv", "--max-attempts", "200"}});

    auto run_all = [&](const std::string& j) -> std::string {
        fs::remove_all(out);
        fs::create_directories(out);
        for (auto args : commands) {
            args.second.push_back("--jobs");
            args.second.push_back(j);
            const auto r = cli(args.second);
            if (r.code != 0) {
                return args.first + " exited " + std::to_string(r.code) + ": " + r.err;
            }
        }
        return "";
    };

    std::string error = run_all("1");
    if (!error.empty()) {
        return {false, error};
    }
    const auto first = snapshot(out);
    error = run_all("1");
    const auto second = snapshot(out);
    error += run_all(std::to_string(std::max(4, jobs())));
    const auto parallel = snapshot(out);
    fs::remove_all(out);
    fs::remove_all(src);
    if (!error.empty()) {
        return {false, error};
    }
    std::size_t differ_rerun = 0, differ_jobs = 0;
    for (const auto& [name, bytes] : first) {
        differ_rerun += second.count(name) && second.at(name) == bytes ? 0 : 1;
        differ_jobs += parallel.count(name) && parallel.at(name) == bytes ? 0 : 1;
    }
    const bool pass = differ_rerun == 0 && differ_jobs == 0 && first.size() == second.size() &&
                      first.size() == parallel.size();
    return {pass, fmt("%zu files from %zu commands; rerun differs in %zu, 1 vs %d workers differs in %zu",
                      first.size(), commands.size(), differ_rerun, std::max(4, jobs()), differ_jobs)};
}

RunRecord record(std::size_t id, const std::string& solver, double cost, std::uint64_t expansions) {
    RunRecord r;
    r.task_id = id;
    r.solver = solver;
    r.found = true;
    r.cost = cost;
    r.expansions = expansions;
    return r;
}

Outcome objective() {
    // two solvers with (f1, f2) = (1.0, 0.6) and (1.1, 0.4)
    std::vector<TaskRecord> one{{"t/m.map", {0, 0}, {1, 1}, 10.0, 0, 0}};
    const auto fixture = aggregate({{record(0, "a", 10, 60)}, {record(0, "b", 11, 40)}}, {record(0, "astar", 10, 100)},
                                   one);
    const auto cross = crossovers(fixture.overall);
    const bool cross_ok = cross.size() == 1 && cross[0].crosses && std::abs(cross[0].lambda - 1.0 / 3.0) <= 1e-12 &&
                          cross[0].better_below == "a";

    // endpoints on a randomized three-solver fixture
    std::vector<TaskRecord> tasks;
    std::vector<RunRecord> base;
    std::vector<std::vector<RunRecord>> runs(3);
    Rng rng(2024);
    for (std::size_t i = 0; i < 200; ++i) {
        const double c = 10.0 + 50.0 * rng.uniform();
        const auto e = static_cast<std::uint64_t>(rng.range(10, 500));
        tasks.push_back({"t/m.map", {0, 0}, {1, 1}, c, 0, 0});
        base.push_back(record(i, "astar", c, e));
        for (std::size_t s = 0; s < 3; ++s) {
            runs[s].push_back(record(i, "s" + std::to_string(s), c * (1.0 + 0.3 * rng.uniform()),
                                     static_cast<std::uint64_t>(rng.range(1, 600))));
        }
    }
    const auto report = aggregate(runs, base, tasks);
    const auto sweep = sweep_lambda(report.overall, {0.0, 0.5, 1.0});
    double worst = 0.0;
    for (std::size_t s = 0; s < report.overall.size(); ++s) {
        const auto& sum = report.overall[s];
        double f1 = 0, f2 = 0;
        for (std::size_t k = 0; k < sum.f1.size(); ++k) {
            f1 += sum.f1[k];
            f2 += sum.f2[k];
        }
        f1 /= static_cast<double>(sum.f1.size());
        f2 /= static_cast<double>(sum.f2.size());
        worst = std::max({worst, std::abs(sweep[3 * s].mean_j - f1), std::abs(sweep[3 * s + 2].mean_j - f2)});
    }
    const bool ends_ok = worst <= 1e-12;
    return {cross_ok && ends_ok,
            fmt("crossover lambda %.12f (expected 1/3), better below: %s; max endpoint error %.2e",
                cross.empty() ? -1.0 : cross[0].lambda, cross.empty() ? "-" : cross[0].better_below.c_str(), worst)};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"perfect-heuristic optimality", perfect_heuristic},
        {"weighted A* bound", weighted_bound},
        {"baseline identity", baseline_identity},
        {"filter compliance", filter_compliance},
        {"generator statistics", generator_statistics},
        {"determinism", determinism},
        {"objective sweep and crossover", objective},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
