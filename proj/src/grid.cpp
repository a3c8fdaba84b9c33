#include "cfpath/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cfpath {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line), detail_(what) {}

Grid::Grid(int width, int height, bool blocked)
    : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw ContractError("grid dimensions must be positive");
    }
    blocked_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                    blocked ? 1 : 0);
}

Grid::Grid(int width, int height, std::vector<std::uint8_t> blocked)
    : width_(width), height_(height), blocked_(std::move(blocked)) {
    if (width < 1 || height < 1) {
        throw ContractError("grid dimensions must be positive");
    }
    if (blocked_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw ContractError("grid cell count does not match dimensions");
    }
    for (auto& b : blocked_) {
        b = b ? 1 : 0;
    }
}

std::size_t Grid::free_count() const noexcept {
    return static_cast<std::size_t>(std::count(blocked_.begin(), blocked_.end(), 0));
}

MoveList neighbors_unchecked(const Grid& grid, Cell cell, const MoveModel& model) {
    MoveList out;
    for (int d = 0; d < 8; ++d) {
        const Cell next{cell.x + kDirDx[d], cell.y + kDirDy[d]};
        if (!grid.passable(next)) {
            continue;
        }
        const bool diagonal = (d & 1) != 0;
        if (diagonal && !model.corner_cutting) {
            if (!grid.passable({cell.x + kDirDx[d], cell.y}) ||
                !grid.passable({cell.x, cell.y + kDirDy[d]})) {
                continue;
            }
        }
        out.push_back({next, diagonal ? kDiagonalCost : kCardinalCost});
    }
    return out;
}

MoveList neighbors(const Grid& grid, Cell cell, const MoveModel& model) {
    require_free(grid, cell, "neighbors");
    return neighbors_unchecked(grid, cell, model);
}

double octile(Cell a, Cell b) noexcept {
    const int dx = std::abs(a.x - b.x);
    const int dy = std::abs(a.y - b.y);
    return kSqrt2 * std::min(dx, dy) + std::abs(dx - dy);
}

void require_free(const Grid& grid, Cell c, std::string_view what) {
    if (!grid.in_bounds(c)) {
        throw ContractError(std::string(what) + ": cell " + to_string(c) + " is out of bounds");
    }
    if (grid.blocked(c)) {
        throw ContractError(std::string(what) + ": cell " + to_string(c) + " is blocked");
    }
}

std::string to_string(Cell c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

namespace {

// Splits on LF; a single trailing LF does not start another line. CR before
// LF is tolerated so files edited on Windows still load.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        auto line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        pos = nl + 1;
    }
    return lines;
}

int parse_header_int(std::string_view line, std::string_view key, std::size_t lineno) {
    const std::string prefix = std::string(key) + " ";
    if (line.substr(0, prefix.size()) != prefix) {
        throw ParseError(lineno, "expected '" + std::string(key) + " <n>'");
    }
    const auto digits = line.substr(prefix.size());
    if (digits.empty() || digits.size() > 9 ||
        !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
        throw ParseError(lineno, "bad " + std::string(key) + " value");
    }
    const int value = std::stoi(std::string(digits));
    if (value < 1) {
        throw ParseError(lineno, std::string(key) + " must be positive");
    }
    return value;
}

} // namespace

Grid parse_map(std::string_view text, MapAlphabet alphabet) {
    const auto lines = split_lines(text);
    if (lines.size() < 4) {
        throw ParseError(lines.size() + 1, "truncated header");
    }
    if (lines[0] != "type octile") {
        throw ParseError(1, "expected 'type octile'");
    }
    const int height = parse_header_int(lines[1], "height", 2);
    const int width = parse_header_int(lines[2], "width", 3);
    if (lines[3] != "map") {
        throw ParseError(4, "expected 'map'");
    }
    const std::size_t body = lines.size() - 4;
    if (body != static_cast<std::size_t>(height)) {
        throw ParseError(body < static_cast<std::size_t>(height) ? lines.size() + 1
                                                                 : 5 + static_cast<std::size_t>(height),
                         "expected " + std::to_string(height) + " map rows, found " +
                             std::to_string(body));
    }
    std::vector<std::uint8_t> blocked;
    blocked.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        const std::size_t lineno = 5 + static_cast<std::size_t>(y);
        const auto row = lines[4 + static_cast<std::size_t>(y)];
        if (row.size() != static_cast<std::size_t>(width)) {
            throw ParseError(lineno, "row has " + std::to_string(row.size()) +
                                         " characters, expected " + std::to_string(width));
        }
        for (char ch : row) {
            switch (ch) {
            case '.':
                blocked.push_back(0);
                break;
            case '@':
            case 'T':
                blocked.push_back(1);
                break;
            case 'G':
            case 'S':
                if (alphabet != MapAlphabet::extended) {
                    throw ParseError(lineno, std::string("unknown map character '") + ch + "'");
                }
                blocked.push_back(0);
                break;
            case 'O':
            case 'W':
                if (alphabet != MapAlphabet::extended) {
                    throw ParseError(lineno, std::string("unknown map character '") + ch + "'");
                }
                blocked.push_back(1);
                break;
            default:
                throw ParseError(lineno, std::string("unknown map character '") + ch + "'");
            }
        }
    }
    return Grid(width, height, std::move(blocked));
}

std::string serialize_map(const Grid& grid) {
    std::string out = "type octile\nheight " + std::to_string(grid.height()) + "\nwidth " +
                      std::to_string(grid.width()) + "\nmap\n";
    out.reserve(out.size() + grid.size() + static_cast<std::size_t>(grid.height()));
    for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) {
            out.push_back(grid.blocked(Cell{x, y}) ? '@' : '.');
        }
        out.push_back('\n');
    }
    return out;
}

Grid load_map(const std::string& path, MapAlphabet alphabet) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open map file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_map(buf.str(), alphabet);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail() + " (in " + path + ")");
    }
}

void save_map(const std::string& path, const Grid& grid) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write map file " + path);
    }
    const auto text = serialize_map(grid);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

} // namespace cfpath
