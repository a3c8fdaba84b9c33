#pragma once

// Reference implementations used as oracles, plus small random generators
// for property tests. Kept deliberately naive.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "cfpath/grid.hpp"
#include "cfpath/rng.hpp"

namespace testing {

using cfpath::Cell;
using cfpath::Grid;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline Grid random_grid(int w, int h, double density, std::uint64_t seed) {
    cfpath::Rng rng(seed);
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    for (auto& c : cells) {
        c = rng.uniform() < density ? 1 : 0;
    }
    return Grid(w, h, std::move(cells));
}

inline Grid from_rows(const std::vector<std::string>& rows) {
    const int h = static_cast<int>(rows.size());
    const int w = static_cast<int>(rows.front().size());
    std::vector<std::uint8_t> cells;
    for (const auto& r : rows) {
        for (char ch : r) {
            cells.push_back(ch == '@' ? 1 : 0);
        }
    }
    return Grid(w, h, std::move(cells));
}

inline std::vector<Cell> free_cells(const Grid& g) {
    std::vector<Cell> out;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!g.blocked(i)) {
            out.push_back(g.cell(i));
        }
    }
    return out;
}

// Move legality written out independently of the library.
inline bool legal_step(const Grid& g, Cell a, Cell b, bool corner_cutting) {
    const int dx = b.x - a.x;
    const int dy = b.y - a.y;
    if ((dx == 0 && dy == 0) || std::abs(dx) > 1 || std::abs(dy) > 1) {
        return false;
    }
    if (!g.passable(a) || !g.passable(b)) {
        return false;
    }
    if (dx != 0 && dy != 0 && !corner_cutting) {
        return g.passable(Cell{a.x + dx, a.y}) && g.passable(Cell{a.x, a.y + dy});
    }
    return true;
}

inline double step_cost(Cell a, Cell b) {
    return (a.x != b.x && a.y != b.y) ? std::sqrt(2.0) : 1.0;
}

// Bellman-Ford style relaxation to a fixed point: cost-to-go to `goal`.
inline std::vector<double> relax_field(const Grid& g, Cell goal, bool corner_cutting = true) {
    std::vector<double> d(g.size(), kInf);
    d[g.index(goal)] = 0.0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g.blocked(i)) {
                continue;
            }
            const Cell a = g.cell(i);
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const Cell b{a.x + dx, a.y + dy};
                    // cost-to-go: moving a -> b, then from b to goal
                    if (!legal_step(g, a, b, corner_cutting)) {
                        continue;
                    }
                    const double via = d[g.index(b)] + step_cost(a, b);
                    if (via < d[i] - 1e-12) {
                        d[i] = via;
                        changed = true;
                    }
                }
            }
        }
    }
    return d;
}

// Minimum cost over all simple paths, by exhaustive DFS. Tiny grids only.
inline double brute_force_cost(const Grid& g, Cell start, Cell goal, bool corner_cutting = true) {
    double best = kInf;
    std::vector<char> on_path(g.size(), 0);
    auto dfs = [&](auto&& self, Cell cur, double cost) -> void {
        if (cost >= best) {
            return;
        }
        if (cur == goal) {
            best = cost;
            return;
        }
        on_path[g.index(cur)] = 1;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const Cell n{cur.x + dx, cur.y + dy};
                if (legal_step(g, cur, n, corner_cutting) && !on_path[g.index(n)]) {
                    self(self, n, cost + step_cost(cur, n));
                }
            }
        }
        on_path[g.index(cur)] = 0;
    };
    dfs(dfs, start, 0.0);
    return best;
}

// 4-connected flood fill from `from`; returns the component mask.
inline std::vector<char> flood4(const Grid& g, Cell from) {
    std::vector<char> seen(g.size(), 0);
    std::vector<Cell> stack{from};
    seen[g.index(from)] = 1;
    while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        const Cell next[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
        for (const Cell n : next) {
            if (g.passable(n) && !seen[g.index(n)]) {
                seen[g.index(n)] = 1;
                stack.push_back(n);
            }
        }
    }
    return seen;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name) {
        path = std::filesystem::temp_directory_path() / ("cfpath_test_" + name);
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string operator/(const std::string& rel) const { return (path / rel).string(); }
};

} // namespace testing
