#pragma once

// 8-connected occupancy grids, octile distance and the MovingAI-style map
// text format.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cfpath {

/// Raised when a caller breaks an operation's precondition (blocked or
/// out-of-bounds cell, mismatched dimensions, ...).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Raised for malformed map text. The message names the offending line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::string detail_;
};

/// Raised for invalid generator / pipeline configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kCardinalCost = 1.0;
inline constexpr double kDiagonalCost = kSqrt2;

struct Cell {
    int x = 0; ///< column
    int y = 0; ///< row

    friend constexpr bool operator==(const Cell&, const Cell&) = default;
};

struct Move {
    Cell target;
    double cost = kCardinalCost;
};

/// Movement rules. Corner cutting is on by default: a diagonal move is legal
/// whenever its destination is free.
struct MoveModel {
    bool corner_cutting = true;
};

/// Immutable binary occupancy map, row-major with the origin at the top-left.
class Grid {
public:
    Grid(int width, int height, bool blocked = false);
    Grid(int width, int height, std::vector<std::uint8_t> blocked);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return blocked_.size(); }

    bool in_bounds(Cell c) const noexcept {
        return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
    }
    std::size_t index(Cell c) const noexcept {
        return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(c.x);
    }
    Cell cell(std::size_t index) const noexcept {
        return {static_cast<int>(index % static_cast<std::size_t>(width_)),
                static_cast<int>(index / static_cast<std::size_t>(width_))};
    }

    bool blocked(Cell c) const noexcept { return blocked_[index(c)] != 0; }
    bool blocked(std::size_t i) const noexcept { return blocked_[i] != 0; }
    /// In bounds and not blocked.
    bool passable(Cell c) const noexcept { return in_bounds(c) && !blocked(c); }

    const std::vector<std::uint8_t>& cells() const noexcept { return blocked_; }
    std::size_t free_count() const noexcept;
    std::size_t blocked_count() const noexcept { return size() - free_count(); }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> blocked_;
};

/// Neighbor offsets in the fixed expansion order N, NE, E, SE, S, SW, W, NW
/// (y grows downwards).
inline constexpr int kDirDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
inline constexpr int kDirDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

/// Fixed-capacity neighbor list; avoids heap traffic in the search loops.
class MoveList {
public:
    void push_back(Move m) noexcept { moves_[size_++] = m; }
    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    const Move& operator[](std::size_t i) const noexcept { return moves_[i]; }
    const Move* begin() const noexcept { return moves_; }
    const Move* end() const noexcept { return moves_ + size_; }

private:
    Move moves_[8]{};
    std::size_t size_ = 0;
};

/// Legal moves out of `cell`. Throws ContractError if the cell is blocked or
/// out of bounds.
MoveList neighbors(const Grid& grid, Cell cell, const MoveModel& model = {});

/// Same as neighbors() without the precondition check.
MoveList neighbors_unchecked(const Grid& grid, Cell cell, const MoveModel& model = {});

/// sqrt(2) * min(dx, dy) + |dx - dy|.
double octile(Cell a, Cell b) noexcept;

/// Throws ContractError unless `c` is in bounds and free. `what` prefixes the message.
void require_free(const Grid& grid, Cell c, std::string_view what);

/// Characters accepted in map bodies.
enum class MapAlphabet {
    strict,   ///< '.', '@', 'T'
    extended, ///< also MovingAI terrain: 'G', 'S' free; 'O', 'W' blocked
};

Grid parse_map(std::string_view text, MapAlphabet alphabet = MapAlphabet::strict);
std::string serialize_map(const Grid& grid);

Grid load_map(const std::string& path, MapAlphabet alphabet = MapAlphabet::strict);
void save_map(const std::string& path, const Grid& grid);

std::string to_string(Cell c);

} // namespace cfpath
