#include "cfpath/search.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace cfpath {

namespace {

struct OpenEntry {
    double f; ///< rounded to kTieResolution
    double g;
    std::uint64_t seq;
    std::size_t node;
};

// std::priority_queue keeps the "largest" on top, so "a < b" means a pops later.
struct OpenOrder {
    bool operator()(const OpenEntry& a, const OpenEntry& b) const noexcept {
        if (a.f != b.f) {
            return a.f > b.f;
        }
        if (a.g != b.g) {
            return a.g < b.g;
        }
        return a.seq > b.seq;
    }
};

constexpr std::uint64_t kNoEntry = std::numeric_limits<std::uint64_t>::max();

} // namespace

HeuristicFn octile_heuristic(Cell goal) {
    return [goal](Cell c) { return octile(c, goal); };
}

SearchResult astar(const Grid& grid, Cell start, Cell goal, const HeuristicFn& h, double weight,
                   const MoveModel& model) {
    require_free(grid, start, "astar start");
    require_free(grid, goal, "astar goal");
    if (!(weight >= 1.0)) {
        throw ContractError("astar: weight must be >= 1");
    }

    SearchResult result;
    if (start == goal) {
        result.found = true;
        result.cost = 0.0;
        result.path = {start};
        return result;
    }

    const std::size_t n = grid.size();
    std::vector<double> g(n, kInfinity);
    std::vector<std::int64_t> parent(n, -1);
    // Sequence number of the node's live OPEN entry; kNoEntry when it has none.
    std::vector<std::uint64_t> live(n, kNoEntry);
    std::vector<std::uint8_t> expanded(n, 0);

    std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
    std::uint64_t seq = 0;

    const auto push = [&](std::size_t node, double gv, Cell c) {
        const double f = std::nearbyint((gv + weight * h(c)) / kTieResolution);
        live[node] = seq;
        open.push({f, gv, seq, node});
        ++seq;
    };

    const std::size_t start_idx = grid.index(start);
    const std::size_t goal_idx = grid.index(goal);
    g[start_idx] = 0.0;
    parent[start_idx] = static_cast<std::int64_t>(start_idx);
    push(start_idx, 0.0, start);

    while (!open.empty()) {
        const OpenEntry top = open.top();
        open.pop();
        if (live[top.node] != top.seq) {
            continue; // superseded by a cheaper copy
        }
        live[top.node] = kNoEntry;

        if (top.node == goal_idx) {
            result.found = true;
            result.cost = g[goal_idx];
            result.path = reconstruct_path(grid, parent, goal);
            return result;
        }

        ++result.expansions;
        if (expanded[top.node]) {
            ++result.reexpansions;
        }
        expanded[top.node] = 1;

        const Cell cur = grid.cell(top.node);
        const double gcur = g[top.node];
        for (const Move& m : neighbors_unchecked(grid, cur, model)) {
            const std::size_t next = grid.index(m.target);
            const double gnext = gcur + m.cost;
            if (gnext < g[next] - kReopenTolerance) {
                g[next] = gnext;
                parent[next] = static_cast<std::int64_t>(top.node);
                push(next, gnext, m.target);
            }
        }
    }
    return result;
}

CostField::CostField(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    if (width < 1 || height < 1 ||
        values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw ContractError("cost field size does not match dimensions");
    }
}

CostField dijkstra_field(const Grid& grid, Cell goal, const MoveModel& model) {
    require_free(grid, goal, "dijkstra_field goal");

    // Legal moves are symmetric under both move models, so searching outward
    // from the goal yields the cost-to-go.
    std::vector<double> dist(grid.size(), kInfinity);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    const std::size_t goal_idx = grid.index(goal);
    dist[goal_idx] = 0.0;
    heap.emplace(0.0, goal_idx);
    while (!heap.empty()) {
        const auto [d, node] = heap.top();
        heap.pop();
        if (d > dist[node]) {
            continue;
        }
        for (const Move& m : neighbors_unchecked(grid, grid.cell(node), model)) {
            const std::size_t next = grid.index(m.target);
            const double nd = d + m.cost;
            if (nd < dist[next]) {
                dist[next] = nd;
                heap.emplace(nd, next);
            }
        }
    }
    return CostField(grid.width(), grid.height(), std::move(dist));
}

HeuristicFn field_heuristic(const CostField& field) {
    // Copy the values so the heuristic does not dangle if the field goes away.
    return [values = field.values(), width = static_cast<std::size_t>(field.width())](Cell c) {
        return values[static_cast<std::size_t>(c.y) * width + static_cast<std::size_t>(c.x)];
    };
}

std::vector<Cell> reconstruct_path(const Grid& grid, const std::vector<std::int64_t>& parents,
                                   Cell goal) {
    if (!grid.in_bounds(goal) || parents.size() != grid.size()) {
        throw InternalError("reconstruct_path: goal or parent table does not match the grid");
    }
    std::vector<Cell> path;
    std::size_t node = grid.index(goal);
    for (std::size_t steps = 0;; ++steps) {
        if (steps > grid.size()) {
            throw InternalError("reconstruct_path: parent chain has a cycle");
        }
        path.push_back(grid.cell(node));
        const std::int64_t p = parents[node];
        if (p < 0 || static_cast<std::size_t>(p) >= parents.size()) {
            throw InternalError("reconstruct_path: missing parent for " + to_string(grid.cell(node)));
        }
        if (static_cast<std::size_t>(p) == node) {
            break;
        }
        node = static_cast<std::size_t>(p);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

double path_cost(const Grid& grid, const std::vector<Cell>& path, const MoveModel& model) {
    double total = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        bool legal = false;
        for (const Move& m : neighbors(grid, path[i - 1], model)) {
            if (m.target == path[i]) {
                total += m.cost;
                legal = true;
                break;
            }
        }
        if (!legal) {
            throw ContractError("path_cost: " + to_string(path[i - 1]) + " -> " +
                                to_string(path[i]) + " is not a legal move");
        }
    }
    return total;
}

} // namespace cfpath
