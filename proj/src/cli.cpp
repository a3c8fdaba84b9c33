#include "cfpath/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cfpath/cf.hpp"
#include "cfpath/eval.hpp"
#include "cfpath/gen_train.hpp"
#include "cfpath/gen_upf.hpp"
#include "cfpath/ingest.hpp"
#include "cfpath/parallel.hpp"
#include "cfpath/solver.hpp"
#include "cfpath/tasks.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace cfpath {

namespace {

struct Globals {
    int jobs = 1;
    bool no_corner_cutting = false;

    MoveModel model() const { return MoveModel{!no_corner_cutting}; }
};

std::string map_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "map_%06zu.map", i);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json manifest_head(const std::string& command, const Globals& g) {
    json m;
    m["tool"] = "cfpath";
    m["version"] = kToolVersion;
    m["command"] = command;
    m["corner_cutting"] = !g.no_corner_cutting;
    return m;
}

void write_manifest(const fs::path& path, const json& manifest) {
    write_text(path, manifest.dump(2) + "\n");
}

void prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw ConfigError("cannot create output directory " + dir);
    }
}

void require_file(const std::string& path, const std::string& what) {
    if (!fs::is_regular_file(path)) {
        throw ConfigError(what + " " + path + " does not exist");
    }
}

void require_dir(const std::string& path, const std::string& what) {
    if (!fs::is_directory(path)) {
        throw ConfigError(what + " " + path + " is not a directory");
    }
}

void prepare_out_file(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) {
        prepare_out_dir(parent.string());
    }
}

fs::path sidecar_manifest(const std::string& out_file) {
    fs::path p(out_file);
    p.replace_extension(".manifest.json");
    return p;
}

std::string tasks_dir_of(const std::string& tasks_path) {
    return fs::path(tasks_path).parent_path().string();
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw ConfigError("bad number '" + item + "' in list '" + text + "'");
        }
    }
    if (out.empty()) {
        throw ConfigError("empty number list");
    }
    return out;
}

// --- gen-train ---------------------------------------------------------------

struct GenTrainArgs {
    std::string kind = "uniform";
    int count = 1;
    int size = 64;
    std::uint64_t seed = 0;
    std::string out_dir;
    double p = 0.5;
    double alpha = 2.0;
    double beta = 2.0;
};

int cmd_gen_train(const GenTrainArgs& a, const Globals& g, std::ostream& out) {
    GenSpec base;
    base.kind = parse_train_kind(a.kind);
    base.width = base.height = a.size;
    base.p = a.p;
    base.alpha = a.alpha;
    base.beta = a.beta;
    base.seed = a.seed;
    validate(base);
    if (a.count < 0) {
        throw ConfigError("--count must be >= 0");
    }
    prepare_out_dir(a.out_dir);

    const auto n = static_cast<std::size_t>(a.count);
    parallel_for(n, g.jobs, [&](std::size_t i) {
        GenSpec spec = base;
        spec.seed = a.seed + i;
        save_map((fs::path(a.out_dir) / map_name(i)).string(), generate(spec));
    });

    json m = manifest_head("gen-train", g);
    m["config"] = {{"kind", to_string(base.kind)}, {"count", a.count}, {"size", a.size}, {"seed", a.seed},
                   {"p", a.p},        {"alpha", a.alpha}, {"beta", a.beta}};
    m["seed_derivation"] = "item seed = seed + index";
    json items = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        items.push_back({{"file", map_name(i)}, {"seed", a.seed + i}});
    }
    m["items"] = items;
    write_manifest(fs::path(a.out_dir) / "manifest.json", m);
    out << "wrote " << n << " maps to " << a.out_dir << "\n";
    return 0;
}

// --- gen-upf -----------------------------------------------------------------

struct GenUpfArgs {
    std::string topology;
    int count = 1;
    int size = 64;
    std::uint64_t seed = 0;
    std::string out_dir;
};

int cmd_gen_upf(const GenUpfArgs& a, const Globals& g, std::ostream& out) {
    UpfSpec base;
    base.topology = parse_topology(a.topology);
    base.width = base.height = a.size;
    base.seed = a.seed;
    if (a.count < 0) {
        throw ConfigError("--count must be >= 0");
    }
    (void)generate(base); // surfaces configuration errors before any file is written
    prepare_out_dir(a.out_dir);

    const auto n = static_cast<std::size_t>(a.count);
    parallel_for(n, g.jobs, [&](std::size_t i) {
        UpfSpec spec = base;
        spec.seed = a.seed + i;
        save_map((fs::path(a.out_dir) / map_name(i)).string(), generate(spec));
    });

    json m = manifest_head("gen-upf", g);
    m["config"] = {
        {"topology", to_string(base.topology)},
        {"count", a.count},
        {"size", a.size},
        {"seed", a.seed},
        {"pyramid", {{"rings", base.pyramid.rings}, {"pitch", base.pyramid.pitch},
                     {"p_one", base.pyramid.p_one}, {"p_three", base.pyramid.p_three}}},
        {"perlin", {{"density", base.perlin.density}, {"passes", base.perlin.passes},
                    {"out_of_bounds_blocked", base.perlin.out_of_bounds_blocked}}},
        {"recursive_division", {{"flip_probability", base.division.flip_probability},
                                {"min_chamber", base.division.min_chamber},
                                {"max_depth", base.division.max_depth},
                                {"doors_per_wall", base.division.doors_per_wall}}},
        {"rotational_symmetry", {{"density", base.symmetry.density}}},
        {"dcaffo", {{"density", base.dcaffo.density}, {"radius", base.dcaffo.radius},
                    {"close_free", base.dcaffo.close_free}}},
    };
    m["seed_derivation"] = "item seed = seed + index";
    json items = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        items.push_back({{"file", map_name(i)}, {"seed", a.seed + i}});
    }
    m["items"] = items;
    write_manifest(fs::path(a.out_dir) / "manifest.json", m);
    out << "wrote " << n << " " << to_string(base.topology) << " maps to " << a.out_dir << "\n";
    return 0;
}

// --- ingest ------------------------------------------------------------------

struct IngestArgs {
    std::string kind;
    std::string src_dir;
    int count = 1;
    int size = 64;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string rule = "majority";
    int source_side = 512;
};

int cmd_ingest(const IngestArgs& a, const Globals& g, std::ostream& out) {
    IngestConfig cfg;
    cfg.kind = parse_source_kind(a.kind);
    cfg.size = a.size;
    cfg.count = a.count;
    cfg.seed = a.seed;
    cfg.rule = parse_downsample_rule(a.rule);
    cfg.baldurs_gate_side = a.source_side;
    require_dir(a.src_dir, "source directory");
    prepare_out_dir(a.out_dir);

    const auto sources = load_sources(a.src_dir);
    const auto outputs = ingest(sources, cfg);
    parallel_for(outputs.size(), g.jobs, [&](std::size_t i) {
        save_map((fs::path(a.out_dir) / map_name(i)).string(), outputs[i].grid);
    });

    json m = manifest_head("ingest", g);
    m["config"] = {{"kind", to_string(cfg.kind)},
                   {"src_dir", a.src_dir},
                   {"count", a.count},
                   {"size", a.size},
                   {"seed", a.seed},
                   {"downsample_rule", to_string(cfg.rule)},
                   {"source_side", a.source_side},
                   {"max_attempts", cfg.max_attempts}};
    m["seed_derivation"] = "item seed = seed + index";
    json items = json::array();
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const auto& r = outputs[i].record;
        items.push_back({{"file", map_name(i)},
                         {"seed", a.seed + i},
                         {"source", r.source},
                         {"crop_x", r.crop_x},
                         {"crop_y", r.crop_y},
                         {"rotation", r.rotation},
                         {"factor", r.factor},
                         {"rejected_draws", r.rejected_draws}});
    }
    m["items"] = items;
    write_manifest(fs::path(a.out_dir) / "manifest.json", m);
    out << "wrote " << outputs.size() << " maps to " << a.out_dir << "\n";
    return 0;
}

// --- gen-tasks ---------------------------------------------------------------

struct GenTasksArgs {
    std::string maps_dir;
    int per_map = 1;
    std::uint64_t seed = 0;
    std::string out;
    double h_min = kDefaultHMin;
    double complexity = 1.05;
    int max_attempts = 1000;
};

std::vector<fs::path> find_maps(const fs::path& dir) {
    std::vector<fs::path> maps;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".map") {
            maps.push_back(entry.path());
        }
    }
    std::sort(maps.begin(), maps.end(), [&](const fs::path& x, const fs::path& y) {
        return fs::relative(x, dir).generic_string() < fs::relative(y, dir).generic_string();
    });
    return maps;
}

struct MapTasks {
    std::vector<TaskRecord> tasks;
    RejectCounts rejects;
    int missing = 0; ///< tasks not produced within the attempt budget
    std::string error;
};

int cmd_gen_tasks(const GenTasksArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    FilterConfig filter{a.h_min, a.complexity, a.max_attempts};
    validate(filter);
    if (a.per_map < 0) {
        throw ConfigError("--per-map must be >= 0");
    }
    require_dir(a.maps_dir, "maps directory");
    prepare_out_file(a.out);

    const fs::path maps_dir(a.maps_dir);
    const auto maps = find_maps(maps_dir);
    const fs::path out_dir = fs::absolute(a.out).parent_path();
    const MoveModel model = g.model();

    std::vector<MapTasks> per_map(maps.size());
    parallel_for(maps.size(), g.jobs, [&](std::size_t m) {
        MapTasks& result = per_map[m];
        try {
            const Grid grid = load_map(maps[m].string());
            const std::string rel = fs::relative(fs::absolute(maps[m]), out_dir).generic_string();
            Rng rng(a.seed + m);
            for (int k = 0; k < a.per_map; ++k) {
                TaskSample s = sample_task(grid, rng, filter, model);
                result.rejects += s.rejects;
                if (s.task) {
                    s.task->map_path = rel;
                    result.tasks.push_back(*s.task);
                } else {
                    ++result.missing;
                }
            }
        } catch (const std::exception& e) {
            result.error = e.what();
        }
    });

    std::vector<TaskRecord> tasks;
    RejectCounts total;
    int missing = 0;
    int failed_maps = 0;
    json items = json::array();
    for (std::size_t m = 0; m < maps.size(); ++m) {
        const auto& r = per_map[m];
        tasks.insert(tasks.end(), r.tasks.begin(), r.tasks.end());
        total += r.rejects;
        missing += r.missing;
        json item = {{"map", fs::relative(maps[m], maps_dir).generic_string()},
                     {"seed", a.seed + m},
                     {"tasks", r.tasks.size()},
                     {"missing", r.missing},
                     {"rejects",
                      {{"diversity", r.rejects.diversity},
                       {"no_start", r.rejects.no_start},
                       {"complexity", r.rejects.complexity}}}};
        if (!r.error.empty()) {
            item["error"] = r.error;
            ++failed_maps;
            err << "error: " << maps[m].string() << ": " << r.error << "\n";
        }
        items.push_back(item);
    }
    save_tasks(a.out, tasks);

    json m = manifest_head("gen-tasks", g);
    m["config"] = {{"maps_dir", a.maps_dir}, {"per_map", a.per_map},       {"seed", a.seed},
                   {"out", a.out},           {"h_min", a.h_min},           {"complexity_factor", a.complexity},
                   {"max_attempts", a.max_attempts}};
    m["seed_derivation"] = "map seed = seed + map index (maps sorted by relative path)";
    m["tasks"] = tasks.size();
    m["missing"] = missing;
    m["rejects"] = {{"diversity", total.diversity}, {"no_start", total.no_start}, {"complexity", total.complexity}};
    m["items"] = items;
    write_manifest(sidecar_manifest(a.out), m);

    err << "rejected: diversity=" << total.diversity << " no_start=" << total.no_start
        << " complexity=" << total.complexity << "\n";
    out << "wrote " << tasks.size() << " tasks from " << maps.size() << " maps to " << a.out << "\n";
    if (missing > 0) {
        err << "warning: " << missing << " tasks could not be sampled within " << a.max_attempts
            << " attempts\n";
    }
    return failed_maps > 0 ? 1 : 0;
}

// --- compute-cf --------------------------------------------------------------

struct ComputeCfArgs {
    std::string tasks;
    std::string out_dir;
};

int cmd_compute_cf(const ComputeCfArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    require_file(a.tasks, "tasks file");
    prepare_out_dir(a.out_dir);
    const auto tasks = load_tasks(a.tasks);
    const MapSet maps = load_task_maps(tasks, tasks_dir_of(a.tasks));
    const MoveModel model = g.model();

    std::vector<std::string> errors(tasks.size());
    parallel_for(tasks.size(), g.jobs, [&](std::size_t i) {
        const auto& t = tasks[i];
        const Grid* grid = maps.find(t.map_path);
        if (grid == nullptr) {
            errors[i] = "map " + t.map_path + " unavailable: " + maps.errors.at(t.map_path);
            return;
        }
        try {
            write_cf(cf_file_path(a.out_dir, i), cf_target(*grid, t.goal, model));
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    json m = manifest_head("compute-cf", g);
    m["config"] = {{"tasks", a.tasks}, {"out_dir", a.out_dir}};
    json failures = json::array();
    std::size_t ok = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (errors[i].empty()) {
            ++ok;
        } else {
            failures.push_back({{"task_id", i}, {"error", errors[i]}});
            err << "error: task " << i << ": " << errors[i] << "\n";
        }
    }
    m["written"] = ok;
    m["failures"] = failures;
    write_manifest(fs::path(a.out_dir) / "manifest.json", m);
    out << "wrote " << ok << " of " << tasks.size() << " cf files to " << a.out_dir << "\n";
    return ok == tasks.size() ? 0 : 1;
}

// --- solve -------------------------------------------------------------------

struct SolveArgs {
    std::string tasks;
    std::string solver;
    std::string cf_dir;
    std::string out;
};

int cmd_solve(const SolveArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    SolveOptions opt;
    opt.solver = parse_solver(a.solver);
    opt.cf_dir = a.cf_dir;
    opt.jobs = g.jobs;
    opt.model = g.model();
    require_file(a.tasks, "tasks file");
    if (opt.solver.kind == SolverKind::cf_file) {
        if (a.cf_dir.empty()) {
            throw ConfigError("solver cf:file requires --cf-dir");
        }
        require_dir(a.cf_dir, "cf directory");
    }
    prepare_out_file(a.out);

    const auto tasks = load_tasks(a.tasks);
    const MapSet maps = load_task_maps(tasks, tasks_dir_of(a.tasks));
    const auto runs = solve_tasks(tasks, maps, opt);
    save_runs(a.out, runs);

    std::size_t failures = 0;
    std::size_t found = 0;
    json failed = json::array();
    for (const auto& r : runs) {
        if (r.status != "ok") {
            ++failures;
            failed.push_back({{"task_id", r.task_id}, {"status", r.status}});
        }
        found += r.found ? 1 : 0;
    }
    json m = manifest_head("solve", g);
    m["config"] = {{"tasks", a.tasks}, {"solver", opt.solver.label()}, {"cf_dir", a.cf_dir}, {"out", a.out}};
    m["tasks"] = runs.size();
    m["found"] = found;
    m["failures"] = failed;
    write_manifest(sidecar_manifest(a.out), m);

    out << opt.solver.label() << ": solved " << found << " of " << runs.size() << " tasks\n";
    if (failures > 0) {
        err << failures << " task(s) failed:\n";
        for (const auto& r : runs) {
            if (r.status != "ok") {
                err << "  task " << r.task_id << ": " << r.status << "\n";
            }
        }
        return 1;
    }
    return 0;
}

// --- report ------------------------------------------------------------------

struct ReportArgs {
    std::vector<std::string> runs;
    std::string baseline;
    std::string tasks;
    std::string lambdas = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
    std::string out_dir;
    std::string runtime;
};

int cmd_report(const ReportArgs& a, const Globals& g, std::ostream& out) {
    const auto lambdas = parse_number_list(a.lambdas);
    for (double l : lambdas) {
        if (!(l >= 0.0 && l <= 1.0)) {
            throw ConfigError("lambda values must lie in [0, 1]");
        }
    }
    // "name=path" renames the solver of a run file
    std::vector<std::pair<std::string, std::string>> inputs;
    for (const auto& spec : a.runs) {
        const auto eq = spec.find('=');
        if (eq != std::string::npos && !fs::exists(spec)) {
            inputs.emplace_back(spec.substr(0, eq), spec.substr(eq + 1));
        } else {
            inputs.emplace_back("", spec);
        }
        require_file(inputs.back().second, "runs file");
    }
    require_file(a.baseline, "baseline runs file");
    require_file(a.tasks, "tasks file");
    if (!a.runtime.empty()) {
        require_file(a.runtime, "runtime file");
    }
    prepare_out_dir(a.out_dir);

    const auto tasks = load_tasks(a.tasks);
    const auto baseline = load_runs(a.baseline);
    std::vector<std::vector<RunRecord>> runs;
    for (const auto& [name, path] : inputs) {
        auto list = load_runs(path);
        if (!name.empty()) {
            for (auto& r : list) {
                r.solver = name;
            }
        }
        runs.push_back(std::move(list));
    }

    const AggregateReport report = aggregate(runs, baseline, tasks);
    const auto sweep = sweep_lambda(report.overall, lambdas);
    const auto cross = crossovers(report.overall);
    const fs::path dir(a.out_dir);
    write_text(dir / "summary.csv", format_summary_csv(report.overall));
    write_text(dir / "per_topology.csv", format_summary_csv(report.per_topology));
    write_text(dir / "lambda_sweep.csv", format_lambda_csv(sweep, lambdas));
    write_text(dir / "crossovers.csv", format_crossovers_csv(cross));
    const std::string table = format_summary_table(report.overall);
    write_text(dir / "table.md", table);
    write_text(dir / "tradeoff.svg", render_tradeoff_svg(sweep));
    if (!a.runtime.empty()) {
        write_text(dir / "runtime.svg", render_runtime_svg(parse_runtime_csv(read_text(a.runtime))));
    }

    json m = manifest_head("report", g);
    m["config"] = {{"runs", a.runs}, {"baseline", a.baseline}, {"tasks", a.tasks}, {"lambdas", lambdas},
                   {"runtime", a.runtime}};
    m["metrics"] = {
        {"ratios", "percent of the baseline run on the same task"},
        {"mean", "arithmetic mean over tasks"},
        {"std", "population standard deviation over tasks"},
        {"optimal_tolerance", kOptimalTolerance},
        {"excluded", "tasks with start == goal or an unsolved run are left out of the ratio means"},
        {"tie_breaking", "smaller f, then larger g, then insertion order"},
        {"reexpansion", "nodes are re-opened when g improves by more than 1e-12"},
    };
    json excluded = json::object();
    for (const auto& s : report.overall) {
        excluded[s.solver] = s.excluded;
    }
    m["excluded_tasks"] = excluded;
    write_manifest(dir / "metadata.json", m);
    out << table;
    return 0;
}

// --- runtime -----------------------------------------------------------------

struct RuntimeArgs {
    std::string tasks;
    std::string solver;
    std::string cf_dir;
    std::string batch_sizes = "1,5,100";
    std::vector<std::string> timing;
    std::string out;
};

int cmd_runtime(const RuntimeArgs& a, const Globals& g, std::ostream& out) {
    RuntimeOptions opt;
    opt.solve.solver = parse_solver(a.solver);
    opt.solve.cf_dir = a.cf_dir;
    opt.solve.model = g.model();
    opt.batch_sizes.clear();
    for (double b : parse_number_list(a.batch_sizes)) {
        if (b < 1 || b != static_cast<int>(b)) {
            throw ConfigError("batch sizes must be positive integers");
        }
        opt.batch_sizes.push_back(static_cast<int>(b));
    }
    for (const auto& spec : a.timing) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--timing expects BATCH=PATH");
        }
        int b = 0;
        try {
            b = std::stoi(spec.substr(0, eq));
        } catch (const std::exception&) {
            throw ConfigError("--timing expects BATCH=PATH");
        }
        const std::string path = spec.substr(eq + 1);
        require_file(path, "timing file");
        opt.external_predict_seconds[b] += total_batch_seconds(load_batch_timing(path));
    }
    require_file(a.tasks, "tasks file");
    if (opt.solve.solver.kind == SolverKind::cf_file) {
        if (a.cf_dir.empty()) {
            throw ConfigError("solver cf:file requires --cf-dir");
        }
        require_dir(a.cf_dir, "cf directory");
    }
    prepare_out_file(a.out);

    const auto tasks = load_tasks(a.tasks);
    const MapSet maps = load_task_maps(tasks, tasks_dir_of(a.tasks));
    const auto rows = runtime_breakdown(tasks, maps, opt);
    const std::string csv = format_runtime_csv(rows);
    if (fs::exists(a.out)) {
        // append rows of another solver to an existing runtime table
        const std::string prev = read_text(a.out);
        write_text(a.out, prev + csv.substr(csv.find('\n') + 1));
    } else {
        write_text(a.out, csv);
    }
    out << csv;
    return 0;
}

int exit_code_for(const CLI::Error& e) {
    const std::string name = e.get_name();
    if (name == "CallForHelp" || name == "CallForAllHelp" || name == "CallForVersion" || name == "Success") {
        return 0;
    }
    return 2;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Grid pathfinding benchmark: map generation, task sampling, solving and reports", "cfpath"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    Globals g;
    app.add_option("--jobs", g.jobs, "Worker threads for per-map / per-task work")
        ->check(CLI::PositiveNumber);
    app.add_flag("--no-corner-cutting", g.no_corner_cutting,
                 "Diagonal moves also need both adjacent orthogonal cells free");

    GenTrainArgs gt;
    auto* sub_gt = app.add_subcommand("gen-train", "Generate training maps (uniform, beta, beta_figures)");
    sub_gt->add_option("--kind", gt.kind, "uniform | beta | beta_figures")->required();
    sub_gt->add_option("--count", gt.count, "Number of maps")->required();
    sub_gt->add_option("--size", gt.size, "Map side length");
    sub_gt->add_option("--seed", gt.seed, "Base seed")->required();
    sub_gt->add_option("--out-dir", gt.out_dir, "Output directory")->required();
    sub_gt->add_option("--p", gt.p, "Blocked probability (uniform)");
    sub_gt->add_option("--alpha", gt.alpha, "Beta alpha");
    sub_gt->add_option("--beta", gt.beta, "Beta beta");

    GenUpfArgs gu;
    auto* sub_gu = app.add_subcommand("gen-upf", "Generate procedural benchmark maps");
    sub_gu->add_option("--topology", gu.topology,
                       "masked_pyramid | prim_maze | perlin | recursive_division | rotational_symmetry | dcaffo")
        ->required();
    sub_gu->add_option("--count", gu.count, "Number of maps")->required();
    sub_gu->add_option("--size", gu.size, "Map side length");
    sub_gu->add_option("--seed", gu.seed, "Base seed")->required();
    sub_gu->add_option("--out-dir", gu.out_dir, "Output directory")->required();

    IngestArgs ig;
    auto* sub_ig = app.add_subcommand("ingest", "Convert external maps to benchmark maps");
    sub_ig->add_option("--kind", ig.kind, "baldurs_gate | moving_street | house_expo | tmp")->required();
    sub_ig->add_option("--src-dir", ig.src_dir, "Directory of source maps")->required();
    sub_ig->add_option("--count", ig.count, "Number of output maps")->required();
    sub_ig->add_option("--size", ig.size, "Output side length");
    sub_ig->add_option("--seed", ig.seed, "Base seed")->required();
    sub_ig->add_option("--out-dir", ig.out_dir, "Output directory")->required();
    sub_ig->add_option("--downsample-rule", ig.rule, "majority | any | center");
    sub_ig->add_option("--source-side", ig.source_side, "Expected side of baldurs_gate sources");

    GenTasksArgs tk;
    auto* sub_tk = app.add_subcommand("gen-tasks", "Sample filtered start/goal tasks for every map");
    sub_tk->add_option("--maps-dir", tk.maps_dir, "Directory searched recursively for .map files")->required();
    sub_tk->add_option("--per-map", tk.per_map, "Tasks per map")->required();
    sub_tk->add_option("--seed", tk.seed, "Base seed")->required();
    sub_tk->add_option("--out", tk.out, "Output task file")->required();
    sub_tk->add_option("--h-min", tk.h_min, "Minimum reachability diversity");
    sub_tk->add_option("--complexity", tk.complexity, "Minimum optimal cost / octile ratio");
    sub_tk->add_option("--max-attempts", tk.max_attempts, "Sampling attempts per task");

    ComputeCfArgs cc;
    auto* sub_cc = app.add_subcommand("compute-cf", "Write the exact correction-factor map of every task");
    sub_cc->add_option("--tasks", cc.tasks, "Task file")->required();
    sub_cc->add_option("--out-dir", cc.out_dir, "Output directory")->required();

    SolveArgs sv;
    auto* sub_sv = app.add_subcommand("solve", "Run a solver on every task");
    sub_sv->add_option("--tasks", sv.tasks, "Task file")->required();
    sub_sv->add_option("--solver", sv.solver, "astar | wastar:W | cf:exact | cf:file")->required();
    sub_sv->add_option("--cf-dir", sv.cf_dir, "Directory of predicted cf maps (cf:file)");
    sub_sv->add_option("--out", sv.out, "Output runs file")->required();

    ReportArgs rp;
    auto* sub_rp = app.add_subcommand("report", "Aggregate run files against a baseline");
    sub_rp->add_option("--runs", rp.runs, "Runs files, optionally NAME=PATH")->required();
    sub_rp->add_option("--baseline", rp.baseline, "Baseline runs file")->required();
    sub_rp->add_option("--tasks", rp.tasks, "Task file")->required();
    sub_rp->add_option("--lambdas", rp.lambdas, "Comma-separated lambda grid");
    sub_rp->add_option("--runtime", rp.runtime, "Runtime table to plot");
    sub_rp->add_option("--out-dir", rp.out_dir, "Output directory")->required();

    RuntimeArgs rt;
    auto* sub_rt = app.add_subcommand("runtime", "Prediction and search time per batch size");
    sub_rt->add_option("--tasks", rt.tasks, "Task file")->required();
    sub_rt->add_option("--solver", rt.solver, "astar | wastar:W | cf:exact | cf:file")->required();
    sub_rt->add_option("--cf-dir", rt.cf_dir, "Directory of predicted cf maps (cf:file)");
    sub_rt->add_option("--batch-sizes", rt.batch_sizes, "Comma-separated batch sizes");
    sub_rt->add_option("--timing", rt.timing, "BATCH=PATH external prediction timing log");
    sub_rt->add_option("--out", rt.out, "Output runtime table (rows are appended)")->required();

    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = exit_code_for(e);
        if (code == 0) {
            app.exit(e, out, err);
        } else {
            err << "usage error: " << e.what() << "\n";
            err << "run with --help for usage\n";
        }
        return code;
    }

    try {
        if (sub_gt->parsed()) return cmd_gen_train(gt, g, out);
        if (sub_gu->parsed()) return cmd_gen_upf(gu, g, out);
        if (sub_ig->parsed()) return cmd_ingest(ig, g, out);
        if (sub_tk->parsed()) return cmd_gen_tasks(tk, g, out, err);
        if (sub_cc->parsed()) return cmd_compute_cf(cc, g, out, err);
        if (sub_sv->parsed()) return cmd_solve(sv, g, out, err);
        if (sub_rp->parsed()) return cmd_report(rp, g, out);
        if (sub_rt->parsed()) return cmd_runtime(rt, g, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace cfpath
