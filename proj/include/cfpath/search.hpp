#pragma once

// Best-first search on 8-connected grids: A*, Weighted A* and the reverse
// Dijkstra cost-to-go field.

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cfpath/grid.hpp"

namespace cfpath {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// g-values must improve by more than this before a node is re-opened.
inline constexpr double kReopenTolerance = 1e-12;

/// f-values closer than this count as tied, so sums of 1 and sqrt(2) taken
/// in different orders still meet the larger-g tie-break.
inline constexpr double kTieResolution = 1e-9;

/// Raised when search bookkeeping is inconsistent (a broken parent chain).
class InternalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cell -> estimated cost-to-go. The goal is bound when the function is built.
using HeuristicFn = std::function<double(Cell)>;

HeuristicFn octile_heuristic(Cell goal);

struct SearchResult {
    bool found = false;
    std::vector<Cell> path;      ///< start..goal, empty when !found
    double cost = kInfinity;     ///< +inf when !found
    std::uint64_t expansions = 0;
    std::uint64_t reexpansions = 0; ///< expansions of nodes that had been expanded before
};

/// Best-first search ordered by f = g + weight * h.
///
/// f is rounded to a multiple of kTieResolution before comparison.
/// OPEN ties are broken by larger g, then by insertion order. Popping the
/// goal ends the search and is not counted as an expansion. A node (closed
/// or not) is re-opened whenever its g improves by more than
/// kReopenTolerance, so the result stays a valid path under inconsistent
/// heuristics.
SearchResult astar(const Grid& grid, Cell start, Cell goal, const HeuristicFn& h,
                   double weight = 1.0, const MoveModel& model = {});

/// Dense exact cost-to-go to a single goal.
class CostField {
public:
    CostField(int width, int height, std::vector<double> values);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    double at(Cell c) const noexcept {
        return values_[static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
                       static_cast<std::size_t>(c.x)];
    }
    double at(std::size_t index) const noexcept { return values_[index]; }
    bool reachable(Cell c) const noexcept { return at(c) != kInfinity; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    int width_;
    int height_;
    std::vector<double> values_;
};

/// Exact shortest-path cost from every cell to `goal`; +inf on blocked and
/// unreachable cells.
CostField dijkstra_field(const Grid& grid, Cell goal, const MoveModel& model = {});

/// Heuristic that reads a cost field (the perfect heuristic when the field is exact).
HeuristicFn field_heuristic(const CostField& field);

/// Follows parent indices from `goal` back to the root (a cell whose parent
/// is itself). Throws InternalError on a missing link or a cycle.
std::vector<Cell> reconstruct_path(const Grid& grid, const std::vector<std::int64_t>& parents,
                                   Cell goal);

/// Sum of move costs along a path. Throws ContractError if two consecutive
/// cells are not a legal move.
double path_cost(const Grid& grid, const std::vector<Cell>& path, const MoveModel& model = {});

} // namespace cfpath
