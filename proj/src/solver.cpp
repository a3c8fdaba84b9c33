#include "cfpath/solver.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cfpath/parallel.hpp"

namespace cfpath {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string format_weight(double w) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", w);
    return buf;
}

} // namespace

std::string SolverSpec::label() const {
    switch (kind) {
    case SolverKind::astar: return "astar";
    case SolverKind::wastar: return "wastar:" + format_weight(weight);
    case SolverKind::cf_exact: return "cf:exact";
    case SolverKind::cf_file: return "cf:file";
    }
    return "?";
}

SolverSpec parse_solver(const std::string& text) {
    if (text == "astar") {
        return {SolverKind::astar, 1.0};
    }
    if (text == "cf:exact") {
        return {SolverKind::cf_exact, 1.0};
    }
    if (text == "cf:file") {
        return {SolverKind::cf_file, 1.0};
    }
    if (text.rfind("wastar:", 0) == 0) {
        const std::string w = text.substr(7);
        double weight = 0.0;
        try {
            std::size_t used = 0;
            weight = std::stod(w, &used);
            if (used != w.size()) {
                throw std::invalid_argument(w);
            }
        } catch (const std::exception&) {
            throw ConfigError("solver: bad weight in '" + text + "'");
        }
        if (!(weight >= 1.0) || weight == kInfinity) {
            throw ConfigError("solver: weight must be a finite value >= 1");
        }
        return {SolverKind::wastar, weight};
    }
    throw ConfigError("unknown solver '" + text + "' (expected astar, wastar:W, cf:exact or cf:file)");
}

std::string cf_file_path(const std::string& cf_dir, std::size_t task_id) {
    char name[32];
    std::snprintf(name, sizeof(name), "task_%06zu.cfm", task_id);
    return (std::filesystem::path(cf_dir) / name).string();
}

std::string resolve_map_path(const std::string& tasks_dir, const std::string& map_path) {
    const std::filesystem::path p(map_path);
    if (p.is_absolute() || tasks_dir.empty()) {
        return p.string();
    }
    return (std::filesystem::path(tasks_dir) / p).string();
}

const Grid* MapSet::find(const std::string& map_path) const {
    const auto it = grids.find(map_path);
    return it == grids.end() ? nullptr : &it->second;
}

MapSet load_task_maps(const std::vector<TaskRecord>& tasks, const std::string& tasks_dir) {
    MapSet set;
    for (const auto& t : tasks) {
        if (set.grids.count(t.map_path) || set.errors.count(t.map_path)) {
            continue;
        }
        try {
            set.grids.emplace(t.map_path, load_map(resolve_map_path(tasks_dir, t.map_path)));
        } catch (const std::exception& e) {
            set.errors.emplace(t.map_path, e.what());
        }
    }
    return set;
}

Prediction predict(const Grid& grid, const TaskRecord& task, std::size_t task_id, const SolveOptions& options) {
    Prediction out;
    const auto t0 = Clock::now();
    try {
        if (options.solver.kind == SolverKind::cf_exact) {
            out.field = cf_target(grid, task.goal, options.model);
        } else if (options.solver.kind == SolverKind::cf_file) {
            out.field = read_cf(cf_file_path(options.cf_dir, task_id));
        }
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    out.seconds = seconds_since(t0);
    return out;
}

namespace {

RunRecord failed(std::size_t task_id, const SolverSpec& spec, const std::string& why) {
    RunRecord r;
    r.task_id = task_id;
    r.solver = spec.label();
    r.found = false;
    r.cost = kInfinity;
    r.status = "error: " + why;
    return r;
}

HeuristicFn make_heuristic(const Grid& grid, const TaskRecord& task, const SolveOptions& options,
                           const Prediction& prediction) {
    if (options.solver.has_prediction()) {
        return h_from_cf(*prediction.field, grid, task.goal);
    }
    return octile_heuristic(task.goal);
}

} // namespace

RunRecord solve_task(const Grid* grid, const TaskRecord& task, std::size_t task_id,
                     const SolveOptions& options) {
    if (grid == nullptr) {
        return failed(task_id, options.solver, "map " + task.map_path + " unavailable");
    }
    Prediction prediction;
    if (options.solver.has_prediction()) {
        prediction = predict(*grid, task, task_id, options);
        if (!prediction.field) {
            RunRecord r = failed(task_id, options.solver, prediction.error);
            r.predict_seconds = prediction.seconds;
            return r;
        }
    }
    try {
        const HeuristicFn h = make_heuristic(*grid, task, options, prediction);
        const double weight = options.solver.kind == SolverKind::wastar ? options.solver.weight : 1.0;
        const auto t0 = Clock::now();
        const SearchResult res = astar(*grid, task.start, task.goal, h, weight, options.model);
        RunRecord r;
        r.search_seconds = seconds_since(t0);
        r.predict_seconds = prediction.seconds;
        r.task_id = task_id;
        r.solver = options.solver.label();
        r.found = res.found;
        r.cost = res.cost;
        r.expansions = res.expansions;
        return r;
    } catch (const std::exception& e) {
        RunRecord r = failed(task_id, options.solver, e.what());
        r.predict_seconds = prediction.seconds;
        return r;
    }
}

std::vector<RunRecord> solve_tasks(const std::vector<TaskRecord>& tasks, const MapSet& maps,
                                   const SolveOptions& options) {
    if (options.solver.kind == SolverKind::cf_file && options.cf_dir.empty()) {
        throw ConfigError("solver cf:file needs a cf directory");
    }
    std::vector<RunRecord> runs(tasks.size());
    parallel_for(tasks.size(), options.jobs, [&](std::size_t i) {
        runs[i] = solve_task(maps.find(tasks[i].map_path), tasks[i], i, options);
    });
    return runs;
}

std::vector<BatchTiming> parse_batch_timing_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<BatchTiming> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (lineno == 1) {
            if (line != "task_id,batch_id,seconds") {
                throw ParseError(1, "unexpected timing header");
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        BatchTiming row;
        char tail = 0;
        long long batch = 0;
        unsigned long long task = 0;
        if (std::sscanf(line.c_str(), "%llu,%lld,%lf%c", &task, &batch, &row.seconds, &tail) != 3 ||
            !(row.seconds >= 0.0)) {
            throw ParseError(lineno, "malformed timing record");
        }
        row.task_id = static_cast<std::size_t>(task);
        row.batch_id = batch;
        rows.push_back(row);
    }
    return rows;
}

std::vector<BatchTiming> load_batch_timing(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open timing file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_batch_timing_csv(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail() + " (in " + path + ")");
    }
}

double total_batch_seconds(const std::vector<BatchTiming>& rows) {
    std::map<std::int64_t, double> per_batch;
    for (const auto& r : rows) {
        auto& v = per_batch[r.batch_id];
        v = std::max(v, r.seconds);
    }
    double sum = 0.0;
    for (const auto& [id, s] : per_batch) {
        sum += s;
    }
    return sum;
}

std::vector<RuntimeRow> runtime_breakdown(const std::vector<TaskRecord>& tasks, const MapSet& maps,
                                          const RuntimeOptions& options) {
    SolveOptions serial = options.solve;
    serial.jobs = 1;
    if (options.batch_sizes.empty()) {
        throw ConfigError("runtime: at least one batch size is required");
    }
    for (int b : options.batch_sizes) {
        if (b < 1) {
            throw ConfigError("runtime: batch sizes must be >= 1");
        }
    }

    // Warm-up pass, discarded.
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        (void)solve_task(maps.find(tasks[i].map_path), tasks[i], i, serial);
    }

    double search = 0.0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const RunRecord r = solve_task(maps.find(tasks[i].map_path), tasks[i], i, serial);
        search += r.search_seconds;
    }

    std::vector<RuntimeRow> rows;
    for (int b : options.batch_sizes) {
        double prediction = 0.0;
        if (serial.solver.has_prediction()) {
            const std::size_t step = static_cast<std::size_t>(b);
            for (std::size_t first = 0; first < tasks.size(); first += step) {
                const std::size_t last = std::min(tasks.size(), first + step);
                const auto t0 = Clock::now();
                for (std::size_t i = first; i < last; ++i) {
                    if (const Grid* g = maps.find(tasks[i].map_path)) {
                        (void)predict(*g, tasks[i], i, serial);
                    }
                }
                prediction += seconds_since(t0);
            }
        }
        if (const auto it = options.external_predict_seconds.find(b); it != options.external_predict_seconds.end()) {
            prediction += it->second;
        }
        rows.push_back({serial.solver.label(), b, prediction, search, prediction + search});
    }
    return rows;
}

} // namespace cfpath
