#include "cfpath/tasks.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cfpath {

void validate(const FilterConfig& cfg) {
    if (!(cfg.h_min > 0.0)) {
        throw ConfigError("filter: h_min must be positive");
    }
    if (!(cfg.complexity_factor >= 1.0)) {
        throw ConfigError("filter: complexity factor must be >= 1");
    }
    if (cfg.max_attempts < 1) {
        throw ConfigError("filter: max_attempts must be >= 1");
    }
}

double reachability_diversity(const CostField& field) {
    double sum = 0.0;
    for (double v : field.values()) {
        if (v != kInfinity) {
            sum += v;
        }
    }
    return sum;
}

double reachability_diversity(const Grid& grid, Cell goal, const MoveModel& model) {
    return reachability_diversity(dijkstra_field(grid, goal, model));
}

TaskSample sample_task(const Grid& grid, Rng& rng, const FilterConfig& cfg, const MoveModel& model) {
    validate(cfg);
    std::vector<std::size_t> free_cells;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!grid.blocked(i)) {
            free_cells.push_back(i);
        }
    }
    if (free_cells.size() < 2) {
        throw ContractError("sample_task: grid needs at least two free cells");
    }

    TaskSample out;
    std::vector<std::size_t> reachable;
    while (out.attempts < cfg.max_attempts) {
        ++out.attempts;
        const Cell goal = grid.cell(free_cells[static_cast<std::size_t>(rng.below(free_cells.size()))]);
        const CostField field = dijkstra_field(grid, goal, model);
        const double h = reachability_diversity(field);
        if (h < cfg.h_min) {
            ++out.rejects.diversity;
            out.last_reject = RejectReason::diversity;
            continue;
        }
        reachable.clear();
        const std::size_t goal_idx = grid.index(goal);
        for (std::size_t i : free_cells) {
            if (i != goal_idx && field.at(i) != kInfinity) {
                reachable.push_back(i);
            }
        }
        if (reachable.empty()) {
            ++out.rejects.no_start;
            out.last_reject = RejectReason::no_start;
            continue;
        }
        const Cell start = grid.cell(reachable[static_cast<std::size_t>(rng.below(reachable.size()))]);
        const double cost = field.at(start);
        const double hoct = octile(start, goal);
        if (cost < cfg.complexity_factor * hoct) {
            ++out.rejects.complexity;
            out.last_reject = RejectReason::complexity;
            continue;
        }
        out.task = TaskRecord{"", start, goal, cost, hoct, h};
        out.last_reject = RejectReason::none;
        return out;
    }
    return out;
}

double h_min_reference(int side) {
    if (side < 1 || side % 2 == 0) {
        throw ContractError("h_min_reference: side must be odd and positive");
    }
    const Grid empty(side, side);
    return reachability_diversity(empty, Cell{side / 2, side / 2});
}

std::string format_tasks_csv(const std::vector<TaskRecord>& tasks) {
    std::string out = "map_path,start_x,start_y,goal_x,goal_y,optimal_cost\n";
    char cost[64];
    for (const auto& t : tasks) {
        std::snprintf(cost, sizeof(cost), "%.9f", t.optimal_cost);
        out += t.map_path + "," + std::to_string(t.start.x) + "," + std::to_string(t.start.y) + "," +
               std::to_string(t.goal.x) + "," + std::to_string(t.goal.y) + "," + cost + "\n";
    }
    return out;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

int to_int(const std::string& s, std::size_t lineno) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception&) {
        throw ParseError(lineno, "bad integer '" + s + "'");
    }
}

double to_double(const std::string& s, std::size_t lineno) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception&) {
        throw ParseError(lineno, "bad number '" + s + "'");
    }
}

} // namespace

std::vector<TaskRecord> parse_tasks_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<TaskRecord> tasks;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (lineno == 1) {
            if (line != "map_path,start_x,start_y,goal_x,goal_y,optimal_cost") {
                throw ParseError(1, "unexpected task file header");
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 6) {
            throw ParseError(lineno, "expected 6 fields, found " + std::to_string(f.size()));
        }
        TaskRecord t;
        t.map_path = f[0];
        t.start = {to_int(f[1], lineno), to_int(f[2], lineno)};
        t.goal = {to_int(f[3], lineno), to_int(f[4], lineno)};
        t.optimal_cost = to_double(f[5], lineno);
        t.h_oct_start = octile(t.start, t.goal);
        tasks.push_back(std::move(t));
    }
    if (lineno == 0) {
        throw ParseError(1, "empty task file");
    }
    return tasks;
}

std::vector<TaskRecord> load_tasks(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open task file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_tasks_csv(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail() + " (in " + path + ")");
    }
}

void save_tasks(const std::string& path, const std::vector<TaskRecord>& tasks) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write task file " + path);
    }
    const auto text = format_tasks_csv(tasks);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::string topology_of(const TaskRecord& task) {
    const auto parent = std::filesystem::path(task.map_path).parent_path().filename().string();
    return parent.empty() ? "." : parent;
}

} // namespace cfpath
