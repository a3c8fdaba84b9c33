#pragma once

// Per-task metrics against the octile A* baseline, aggregates, the J(lambda)
// trade-off sweep and runtime accounting.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfpath/tasks.hpp"

namespace cfpath {

/// |cost - optimal| at or below this counts as an optimal solve.
inline constexpr double kOptimalTolerance = 1e-6;

struct RunRecord {
    std::size_t task_id = 0;
    std::string solver;
    bool found = false;
    double cost = 0.0;
    std::uint64_t expansions = 0;
    double predict_seconds = 0.0;
    double search_seconds = 0.0;
    std::string status = "ok"; ///< "ok" or an error description
};

/// run.cost / baseline.cost. Throws ContractError for different tasks, an
/// unsolved run, or a zero-cost baseline (start == goal).
double cost_ratio(const RunRecord& run, const RunRecord& baseline);
/// run.expansions / baseline.expansions, same preconditions (zero baseline
/// expansions only occur when start == goal).
double exp_ratio(const RunRecord& run, const RunRecord& baseline);
bool optimal_found(const RunRecord& run, double optimal_cost);
/// (1 - lambda) * f1 + lambda * f2; throws ContractError for lambda outside [0, 1].
double j_objective(double f1, double f2, double lambda);

/// Arithmetic mean and population standard deviation.
struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};
MeanStd mean_std(const std::vector<double>& values);

struct SolverSummary {
    std::string solver;
    std::string group; ///< topology label, or "all"
    std::size_t tasks = 0;
    std::size_t excluded = 0; ///< degenerate baseline (start == goal) or failed runs
    double optimal_found_pct = 0.0;
    MeanStd cost_ratio_pct;
    MeanStd exp_ratio_pct;
    std::vector<double> f1; ///< per included task, as ratios (not percent)
    std::vector<double> f2;
};

struct AggregateReport {
    std::vector<SolverSummary> overall;      ///< one per solver, input order
    std::vector<SolverSummary> per_topology; ///< solver-major, topologies sorted
};

/// Raised when run files do not cover the same task set.
class TaskSetMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// `runs` holds one run list per solver. Every list (and the baseline) must
/// cover exactly the task ids 0..tasks.size()-1.
AggregateReport aggregate(const std::vector<std::vector<RunRecord>>& runs,
                          const std::vector<RunRecord>& baseline,
                          const std::vector<TaskRecord>& tasks);

struct LambdaRow {
    std::string solver;
    double lambda = 0.0;
    double mean_j = 0.0;
};

/// Mean per-task J for every solver and lambda.
std::vector<LambdaRow> sweep_lambda(const std::vector<SolverSummary>& summaries,
                                    const std::vector<double>& lambdas);

struct Crossover {
    std::string first;
    std::string second;
    bool crosses = false;
    double lambda = 0.0; ///< where the mean-J lines meet, when crosses
    /// Solver with the lower mean J for lambda below the crossover.
    std::string better_below;
};

/// Pairwise crossings of the (linear) mean-J lines inside [0, 1].
std::vector<Crossover> crossovers(const std::vector<SolverSummary>& summaries);

struct RuntimeRow {
    std::string solver;
    int batch_size = 1;
    double predict_seconds = 0.0;
    double search_seconds = 0.0;
    double total_seconds = 0.0;
};

// Report files.
std::string format_runs_csv(const std::vector<RunRecord>& runs);
std::vector<RunRecord> parse_runs_csv(const std::string& text);
std::vector<RunRecord> load_runs(const std::string& path);
void save_runs(const std::string& path, const std::vector<RunRecord>& runs);

std::string format_summary_csv(const std::vector<SolverSummary>& rows);
/// Markdown table with the published precision: "100.00 | 100.0 | 100.0".
std::string format_summary_table(const std::vector<SolverSummary>& rows);
std::string format_lambda_csv(const std::vector<LambdaRow>& rows, const std::vector<double>& lambdas);
std::string format_crossovers_csv(const std::vector<Crossover>& rows);
std::string format_runtime_csv(const std::vector<RuntimeRow>& rows);
std::vector<RuntimeRow> parse_runtime_csv(const std::string& text);

std::string render_tradeoff_svg(const std::vector<LambdaRow>& rows);
std::string render_runtime_svg(const std::vector<RuntimeRow>& rows);

} // namespace cfpath
