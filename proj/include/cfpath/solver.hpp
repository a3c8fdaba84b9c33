#pragma once

// Solver specs and batch solving of task files.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfpath/cf.hpp"
#include "cfpath/eval.hpp"
#include "cfpath/tasks.hpp"

namespace cfpath {

enum class SolverKind { astar, wastar, cf_exact, cf_file };

struct SolverSpec {
    SolverKind kind = SolverKind::astar;
    double weight = 1.0; ///< wastar only

    /// "astar", "wastar:<w>", "cf:exact" or "cf:file".
    std::string label() const;
    bool has_prediction() const { return kind == SolverKind::cf_exact || kind == SolverKind::cf_file; }
};

/// Throws ConfigError on unknown names or a weight below 1.
SolverSpec parse_solver(const std::string& text);

/// <cf_dir>/task_<id, 6 digits>.cfm
std::string cf_file_path(const std::string& cf_dir, std::size_t task_id);

/// Map path of a task resolved against the directory of the task file.
std::string resolve_map_path(const std::string& tasks_dir, const std::string& map_path);

/// Loads every distinct map referenced by `tasks`. Unreadable maps are
/// reported in `errors` (keyed by map_path) instead of throwing.
struct MapSet {
    std::map<std::string, Grid> grids;
    std::map<std::string, std::string> errors;
    const Grid* find(const std::string& map_path) const;
};
MapSet load_task_maps(const std::vector<TaskRecord>& tasks, const std::string& tasks_dir);

struct SolveOptions {
    SolverSpec solver;
    std::string cf_dir; ///< required for cf:file
    int jobs = 1;
    MoveModel model;
};

/// Prediction step of a cf solver for one task: the field plus the time spent
/// producing it (file read for cf:file, target computation for cf:exact).
struct Prediction {
    std::optional<CfField> field;
    double seconds = 0.0;
    std::string error;
};
Prediction predict(const Grid& grid, const TaskRecord& task, std::size_t task_id, const SolveOptions& options);

/// Solves one task. Failures (missing cf file, bad map) come back as a record
/// with found == false and a status other than "ok".
RunRecord solve_task(const Grid* grid, const TaskRecord& task, std::size_t task_id,
                     const SolveOptions& options);

/// One record per task, ordered by task id regardless of `jobs`.
std::vector<RunRecord> solve_tasks(const std::vector<TaskRecord>& tasks, const MapSet& maps,
                                   const SolveOptions& options);

/// Per-batch wall time logged by an external predictor: task_id,batch_id,seconds.
struct BatchTiming {
    std::size_t task_id = 0;
    std::int64_t batch_id = 0;
    double seconds = 0.0;
};
std::vector<BatchTiming> parse_batch_timing_csv(const std::string& text);
std::vector<BatchTiming> load_batch_timing(const std::string& path);
/// Sum over distinct batches of the batch wall time (max over its rows).
double total_batch_seconds(const std::vector<BatchTiming>& rows);

struct RuntimeOptions {
    SolveOptions solve;
    std::vector<int> batch_sizes{1};
    /// Optional external prediction timing per batch size; added to the
    /// prediction column of that row.
    std::map<int, double> external_predict_seconds;
};

/// One row per batch size. Search is timed once per task (it does not
/// depend on batching); prediction is timed per batch of b consecutive tasks.
/// A full untimed pass runs first as warm-up. Timing is always serial.
std::vector<RuntimeRow> runtime_breakdown(const std::vector<TaskRecord>& tasks, const MapSet& maps,
                                          const RuntimeOptions& options);

} // namespace cfpath
