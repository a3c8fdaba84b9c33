#pragma once

// Start/goal sampling with the reachability-diversity and
// reachability-complexity filters, and the task CSV format.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfpath/grid.hpp"
#include "cfpath/rng.hpp"
#include "cfpath/search.hpp"

namespace cfpath {

/// Default minimum reachability diversity. Kept at the published constant;
/// h_min_reference(11) evaluates to about 531.13 under the octile metric.
inline constexpr double kDefaultHMin = 553.0;

struct FilterConfig {
    double h_min = kDefaultHMin;
    double complexity_factor = 1.05;
    int max_attempts = 1000;
};

void validate(const FilterConfig& cfg);

struct TaskRecord {
    std::string map_path;
    Cell start;
    Cell goal;
    double optimal_cost = 0.0;
    double h_oct_start = 0.0;
    double h_value = 0.0; ///< reachability diversity of the goal
};

struct RejectCounts {
    std::uint64_t diversity = 0;  ///< goal component too small (H < h_min)
    std::uint64_t no_start = 0;   ///< goal reaches no other cell
    std::uint64_t complexity = 0; ///< near-straight-line task

    RejectCounts& operator+=(const RejectCounts& o) {
        diversity += o.diversity;
        no_start += o.no_start;
        complexity += o.complexity;
        return *this;
    }
    std::uint64_t total() const { return diversity + no_start + complexity; }
};

enum class RejectReason { none, diversity, no_start, complexity };

struct TaskSample {
    std::optional<TaskRecord> task; ///< empty when attempts ran out
    RejectCounts rejects;
    RejectReason last_reject = RejectReason::none;
    int attempts = 0;
};

/// Sum of exact cost-to-go over every cell reachable from the goal.
double reachability_diversity(const Grid& grid, Cell goal, const MoveModel& model = {});
double reachability_diversity(const CostField& field);

/// Each attempt draws a goal uniformly among free cells, builds one Dijkstra
/// field, rejects goals with diversity below h_min, draws a start uniformly
/// among reachable non-goal cells and keeps the pair when
/// optimal_cost >= complexity_factor * octile(start, goal).
/// Throws ContractError if the grid has fewer than two free cells.
TaskSample sample_task(const Grid& grid, Rng& rng, const FilterConfig& cfg = {},
                       const MoveModel& model = {});

/// Diversity of an empty side x side grid with a centered goal (odd side).
double h_min_reference(int side);

// Task CSV: header "map_path,start_x,start_y,goal_x,goal_y,optimal_cost",
// costs with 9 fractional digits.
std::string format_tasks_csv(const std::vector<TaskRecord>& tasks);
/// Only the columns present in the file are filled (h_oct_start is
/// recomputed, h_value left at 0). Throws ParseError with a line number.
std::vector<TaskRecord> parse_tasks_csv(const std::string& text);

std::vector<TaskRecord> load_tasks(const std::string& path);
void save_tasks(const std::string& path, const std::vector<TaskRecord>& tasks);

/// Topology label of a task: the name of the directory holding its map file.
std::string topology_of(const TaskRecord& task);

} // namespace cfpath
