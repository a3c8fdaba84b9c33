#include "cfpath/gen_upf.hpp"

#include <algorithm>
#include <array>

namespace cfpath {

std::string to_string(Topology topology) {
    switch (topology) {
    case Topology::masked_pyramid:
        return "masked_pyramid";
    case Topology::prim_maze:
        return "prim_maze";
    case Topology::perlin:
        return "perlin";
    case Topology::recursive_division:
        return "recursive_division";
    case Topology::rotational_symmetry:
        return "rotational_symmetry";
    case Topology::dcaffo:
        return "dcaffo";
    }
    return "unknown";
}

Topology parse_topology(const std::string& name) {
    for (Topology t : all_topologies()) {
        if (to_string(t) == name) {
            return t;
        }
    }
    throw ConfigError("unknown topology '" + name + "'");
}

const std::vector<Topology>& all_topologies() {
    static const std::vector<Topology> all = {
        Topology::masked_pyramid,     Topology::prim_maze,           Topology::perlin,
        Topology::recursive_division, Topology::rotational_symmetry, Topology::dcaffo,
    };
    return all;
}

namespace {

using Cells = std::vector<std::uint8_t>;

std::size_t idx(int width, int x, int y) {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
}

Grid noise(int width, int height, double density, Rng& rng) {
    Cells cells(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (auto& c : cells) {
        c = rng.bernoulli(density) ? 1 : 0;
    }
    return Grid(width, height, std::move(cells));
}

void require_size(const UpfSpec& spec) {
    if (spec.width < 1 || spec.height < 1) {
        throw ConfigError("map size must be positive");
    }
}

} // namespace

// --- Masked Pyramid ------------------------------------------------------

PyramidTrace gen_masked_pyramid_traced(const UpfSpec& spec) {
    require_size(spec);
    const auto& params = spec.pyramid;
    const int side = std::min(spec.width, spec.height);
    if (side < 33) {
        throw ConfigError("masked_pyramid needs at least 33x33 cells");
    }
    if (params.rings < 1) {
        throw ConfigError("masked_pyramid needs at least one ring");
    }
    if (params.p_one < 0.0 || params.p_three < 0.0 || params.p_one + params.p_three > 1.0) {
        throw ConfigError("masked_pyramid corner probabilities must form a distribution");
    }
    const int span = 2 * (params.rings - 1); // inset range covered by the rings, in pitch units
    const int pitch = params.pitch > 0 ? params.pitch : (span == 0 ? 1 : std::max(1, (side - 4) / span));
    // The innermost ring must still enclose at least a 2x2 room.
    if (span * pitch + 4 > side) {
        throw ConfigError("masked_pyramid: " + std::to_string(params.rings) +
                          " rings at pitch " + std::to_string(pitch) + " do not fit");
    }
    const int margin_x = (spec.width - span * pitch - 4) / 2;
    const int margin_y = (spec.height - span * pitch - 4) / 2;

    Rng rng(spec.seed);
    Cells cells(static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height), 0);
    PyramidTrace trace{Grid(1, 1), pitch, {}, {}};
    for (int ring = 0; ring < params.rings; ++ring) {
        const int inset = ring * pitch;
        const int x0 = margin_x + inset;
        const int y0 = margin_y + inset;
        const int x1 = spec.width - 1 - x0;
        const int y1 = spec.height - 1 - y0;
        for (int x = x0; x <= x1; ++x) {
            cells[idx(spec.width, x, y0)] = 1;
            cells[idx(spec.width, x, y1)] = 1;
        }
        for (int y = y0; y <= y1; ++y) {
            cells[idx(spec.width, x0, y)] = 1;
            cells[idx(spec.width, x1, y)] = 1;
        }

        const double u = rng.uniform();
        const int blocked = u < params.p_one ? 1 : (u < params.p_one + params.p_three ? 3 : 2);
        std::array<Cell, 4> corners = {Cell{x0, y0}, Cell{x1, y0}, Cell{x1, y1}, Cell{x0, y1}};
        // Fisher-Yates; the first `blocked` corners stay walls, the rest open.
        for (int i = 3; i > 0; --i) {
            const auto j = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i) + 1));
            std::swap(corners[static_cast<std::size_t>(i)], corners[j]);
        }
        for (std::size_t i = static_cast<std::size_t>(blocked); i < 4; ++i) {
            cells[idx(spec.width, corners[i].x, corners[i].y)] = 0;
        }
        trace.ring_insets.push_back(inset + std::min(margin_x, margin_y));
        trace.blocked_corner_counts.push_back(blocked);
    }
    trace.grid = Grid(spec.width, spec.height, std::move(cells));
    return trace;
}

Grid gen_masked_pyramid(const UpfSpec& spec) {
    return gen_masked_pyramid_traced(spec).grid;
}

// --- Prim maze -----------------------------------------------------------

PrimTrace gen_prim_maze_traced(const UpfSpec& spec) {
    require_size(spec);
    const int w = spec.width;
    const int h = spec.height;
    Rng rng(spec.seed);
    Cells cells(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 1);
    PrimTrace trace{Grid(1, 1), {}};

    constexpr int dx4[4] = {0, 1, 0, -1};
    constexpr int dy4[4] = {-1, 0, 1, 0};
    std::vector<Cell> frontier;
    const auto open_cell = [&](Cell c) {
        cells[idx(w, c.x, c.y)] = 0;
        trace.opened.push_back(c);
        for (int d = 0; d < 4; ++d) {
            const Cell n{c.x + dx4[d], c.y + dy4[d]};
            if (n.x >= 0 && n.y >= 0 && n.x < w && n.y < h && cells[idx(w, n.x, n.y)]) {
                frontier.push_back(n);
            }
        }
    };

    open_cell({static_cast<int>(rng.below(static_cast<std::uint64_t>(w))),
               static_cast<int>(rng.below(static_cast<std::uint64_t>(h)))});
    while (!frontier.empty()) {
        const auto pick = static_cast<std::size_t>(rng.below(frontier.size()));
        const Cell c = frontier[pick];
        frontier[pick] = frontier.back();
        frontier.pop_back();
        if (!cells[idx(w, c.x, c.y)]) {
            continue;
        }
        int open_neighbors = 0;
        for (int d = 0; d < 4; ++d) {
            const Cell n{c.x + dx4[d], c.y + dy4[d]};
            if (n.x >= 0 && n.y >= 0 && n.x < w && n.y < h && !cells[idx(w, n.x, n.y)]) {
                ++open_neighbors;
            }
        }
        if (open_neighbors == 1) {
            open_cell(c);
        }
    }
    trace.grid = Grid(w, h, std::move(cells));
    return trace;
}

Grid gen_prim_maze(const UpfSpec& spec) {
    return gen_prim_maze_traced(spec).grid;
}

// --- Perlin (cellular smoothing) ------------------------------------------

Grid majority_smooth(const Grid& grid, bool out_of_bounds_blocked) {
    const int w = grid.width();
    const int h = grid.height();
    Cells out(grid.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int blocked = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const Cell n{x + dx, y + dy};
                    if (grid.in_bounds(n)) {
                        blocked += grid.blocked(n) ? 1 : 0;
                    } else if (out_of_bounds_blocked) {
                        ++blocked;
                    }
                }
            }
            out[idx(w, x, y)] = blocked > 4 ? 1 : 0;
        }
    }
    return Grid(w, h, std::move(out));
}

Grid gen_perlin(const UpfSpec& spec) {
    require_size(spec);
    if (spec.perlin.passes < 0) {
        throw ConfigError("perlin: pass count must be non-negative");
    }
    Rng rng(spec.seed);
    Grid grid = noise(spec.width, spec.height, spec.perlin.density, rng);
    for (int i = 0; i < spec.perlin.passes; ++i) {
        grid = majority_smooth(grid, spec.perlin.out_of_bounds_blocked);
    }
    return grid;
}

// --- Recursive Division ---------------------------------------------------

namespace {

struct Divider {
    int width;
    int height;
    const DivisionParams& params;
    Rng& rng;
    Cells blocked;
    Cells wall;
    Cells door;
    std::size_t walls = 0;

    bool is_door(int x, int y) const {
        return x >= 0 && y >= 0 && x < width && y < height && door[idx(width, x, y)];
    }

    void place(int x, int y, bool as_door) {
        const auto i = idx(width, x, y);
        if (as_door) {
            blocked[i] = 0;
            wall[i] = 0;
            door[i] = 1;
        } else {
            blocked[i] = 1;
            wall[i] = 1;
        }
    }

    // Chamber covers columns [x0, x0 + w) and rows [y0, y0 + h).
    void divide(int x0, int y0, int w, int h, bool horizontal, int depth) {
        if (w < params.min_chamber || h < params.min_chamber) {
            return;
        }
        if (params.max_depth >= 0 && depth >= params.max_depth) {
            return;
        }
        // A wall may not start or end in front of a door of the enclosing walls.
        std::vector<int> options;
        if (horizontal) {
            for (int r = y0 + 1; r <= y0 + h - 2; ++r) {
                if (!is_door(x0 - 1, r) && !is_door(x0 + w, r)) {
                    options.push_back(r);
                }
            }
        } else {
            for (int c = x0 + 1; c <= x0 + w - 2; ++c) {
                if (!is_door(c, y0 - 1) && !is_door(c, y0 + h)) {
                    options.push_back(c);
                }
            }
        }
        if (options.empty()) {
            return;
        }
        const int at = options[static_cast<std::size_t>(rng.below(options.size()))];
        ++walls;
        const int length = horizontal ? w : h;
        for (int k = 0; k < length; ++k) {
            if (horizontal) {
                place(x0 + k, at, false);
            } else {
                place(at, y0 + k, false);
            }
        }
        for (int d = 0; d < params.doors_per_wall; ++d) {
            const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(length)));
            if (horizontal) {
                place(x0 + k, at, true);
            } else {
                place(at, y0 + k, true);
            }
        }
        if (horizontal) {
            divide(x0, y0, w, at - y0, false, depth + 1);
            divide(x0, at + 1, w, y0 + h - at - 1, false, depth + 1);
        } else {
            divide(x0, y0, at - x0, h, true, depth + 1);
            divide(at + 1, y0, x0 + w - at - 1, h, true, depth + 1);
        }
    }
};

} // namespace

DivisionTrace gen_recursive_division_traced(const UpfSpec& spec) {
    require_size(spec);
    const auto& params = spec.division;
    if (params.flip_probability < 0.0 || params.flip_probability > 1.0) {
        throw ConfigError("recursive_division: flip probability must lie in [0, 1]");
    }
    if (params.min_chamber < 3 || params.doors_per_wall < 0) {
        throw ConfigError("recursive_division: min chamber must be >= 3 and doors >= 0");
    }
    Rng rng(spec.seed);
    const auto n = static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height);
    Divider divider{spec.width, spec.height, params, rng, Cells(n, 0), Cells(n, 0), Cells(n, 0)};
    const bool horizontal = rng.below(2) == 0;
    divider.divide(0, 0, spec.width, spec.height, horizontal, 0);

    DivisionTrace trace{Grid(1, 1), 0, 0, divider.walls};
    for (std::size_t i = 0; i < n; ++i) {
        if (!divider.wall[i]) {
            continue;
        }
        ++trace.wall_cells;
        if (rng.bernoulli(params.flip_probability)) {
            divider.blocked[i] = 0;
            ++trace.flipped_cells;
        }
    }
    trace.grid = Grid(spec.width, spec.height, std::move(divider.blocked));
    return trace;
}

Grid gen_recursive_division(const UpfSpec& spec) {
    return gen_recursive_division_traced(spec).grid;
}

// --- Rotational Symmetry ---------------------------------------------------

Grid gen_rotational_symmetry(const UpfSpec& spec) {
    require_size(spec);
    if (spec.width % 2 != 0 || spec.height % 2 != 0) {
        throw ConfigError("rotational_symmetry needs even map dimensions");
    }
    Rng rng(spec.seed);
    const int qw = spec.width / 2;
    const int qh = spec.height / 2;
    const Grid quadrant = noise(qw, qh, spec.symmetry.density, rng);
    Cells cells(static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height));
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            const int qx = std::min(x, spec.width - 1 - x);
            const int qy = std::min(y, spec.height - 1 - y);
            cells[idx(spec.width, x, y)] = quadrant.blocked(Cell{qx, qy}) ? 1 : 0;
        }
    }
    return Grid(spec.width, spec.height, std::move(cells));
}

bool is_mirror_symmetric(const Grid& grid) {
    const int w = grid.width();
    const int h = grid.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const bool b = grid.blocked(Cell{x, y});
            if (b != grid.blocked(Cell{w - 1 - x, y}) || b != grid.blocked(Cell{x, h - 1 - y})) {
                return false;
            }
        }
    }
    return true;
}

// --- Dcaffo -------------------------------------------------------------------

Grid morphological_close(const Grid& grid, int radius) {
    if (radius < 0) {
        throw ConfigError("closing radius must be non-negative");
    }
    const int w = grid.width();
    const int h = grid.height();
    Cells dilated(grid.size(), 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool any = false;
            for (int dy = -radius; dy <= radius && !any; ++dy) {
                for (int dx = -radius; dx <= radius && !any; ++dx) {
                    const Cell n{x + dx, y + dy};
                    any = grid.in_bounds(n) && grid.blocked(n);
                }
            }
            dilated[idx(w, x, y)] = any ? 1 : 0;
        }
    }
    Cells eroded(grid.size(), 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool all = true;
            for (int dy = -radius; dy <= radius && all; ++dy) {
                for (int dx = -radius; dx <= radius && all; ++dx) {
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (nx >= 0 && ny >= 0 && nx < w && ny < h) {
                        all = dilated[idx(w, nx, ny)] != 0;
                    }
                }
            }
            eroded[idx(w, x, y)] = all ? 1 : 0;
        }
    }
    return Grid(w, h, std::move(eroded));
}

Grid invert(const Grid& grid) {
    Cells cells(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        cells[i] = grid.blocked(i) ? 0 : 1;
    }
    return Grid(grid.width(), grid.height(), std::move(cells));
}

Grid gen_dcaffo(const UpfSpec& spec) {
    require_size(spec);
    Rng rng(spec.seed);
    const Grid raw = noise(spec.width, spec.height, spec.dcaffo.density, rng);
    if (spec.dcaffo.close_free) {
        return invert(morphological_close(invert(raw), spec.dcaffo.radius));
    }
    return morphological_close(raw, spec.dcaffo.radius);
}

Grid generate(const UpfSpec& spec) {
    switch (spec.topology) {
    case Topology::masked_pyramid:
        return gen_masked_pyramid(spec);
    case Topology::prim_maze:
        return gen_prim_maze(spec);
    case Topology::perlin:
        return gen_perlin(spec);
    case Topology::recursive_division:
        return gen_recursive_division(spec);
    case Topology::rotational_symmetry:
        return gen_rotational_symmetry(spec);
    case Topology::dcaffo:
        return gen_dcaffo(spec);
    }
    throw ConfigError("unknown topology");
}

} // namespace cfpath
