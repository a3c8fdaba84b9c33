#pragma once

// Correction-factor fields: supervision targets, loss masks, the heuristic
// rebuilt from a (predicted) field, and the binary CF-map file format.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfpath/grid.hpp"
#include "cfpath/search.hpp"

namespace cfpath {

/// Floor applied to cf before dividing the octile distance by it.
inline constexpr double kCfEpsilon = 1e-9;

/// Values read from disk may exceed [0, 1] by at most this much.
inline constexpr double kCfRangeSlack = 1e-6;

/// Raised for malformed CF-map files.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-cell mask; true on free non-goal cells.
using Mask = std::vector<std::uint8_t>;

/// Dense correction factor plus the mask of cells that carry supervision.
///
/// cf = octile / h* on reachable free non-goal cells, 0 on unreachable free
/// cells, and the dummy value 1 wherever mask is false (obstacles, goal).
class CfField {
public:
    CfField(int width, int height, std::vector<double> cf, Mask mask);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return cf_.size(); }
    double cf(Cell c) const noexcept { return cf_[index(c)]; }
    bool masked_in(Cell c) const noexcept { return mask_[index(c)] != 0; }
    const std::vector<double>& values() const noexcept { return cf_; }
    const Mask& mask() const noexcept { return mask_; }

    friend bool operator==(const CfField&, const CfField&) = default;

private:
    std::size_t index(Cell c) const noexcept {
        return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(c.x);
    }

    int width_;
    int height_;
    std::vector<double> cf_;
    Mask mask_;
};

Mask build_mask(const Grid& grid, Cell goal);

CfField cf_target(const Grid& grid, Cell goal, const MoveModel& model = {});
/// Same, reusing an already computed cost-to-go field for `goal`.
CfField cf_target(const Grid& grid, Cell goal, const CostField& field);

/// h(n) = octile(n, goal) / max(cf(n), kCfEpsilon).
///
/// The goal needs no special case: octile(goal, goal) is 0 whatever the
/// prediction there. Throws ContractError when `goal` lies outside the field.
HeuristicFn h_from_cf(const CfField& cf, Cell goal);
/// As above, also checking that the field matches the grid dimensions.
HeuristicFn h_from_cf(const CfField& cf, const Grid& grid, Cell goal);

/// CF-map binary layout: "CFM1", u32 width, u32 height (little-endian),
/// width*height f32 cf values row-major, width*height mask bytes (0/1).
std::string encode_cf(const CfField& field);
CfField decode_cf(const std::string& bytes);

void write_cf(const std::string& path, const CfField& field);
CfField read_cf(const std::string& path);

} // namespace cfpath
