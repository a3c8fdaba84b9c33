#pragma once

// Procedural evaluation topologies: Masked Pyramid, Prim maze, Perlin-style
// cellular caves, Recursive Division, mirror-symmetric noise and Dcaffo.

#include <cstdint>
#include <string>
#include <vector>

#include "cfpath/grid.hpp"
#include "cfpath/rng.hpp"

namespace cfpath {

enum class Topology {
    masked_pyramid,
    prim_maze,
    perlin,
    recursive_division,
    rotational_symmetry,
    dcaffo,
};

std::string to_string(Topology topology);
Topology parse_topology(const std::string& name);
const std::vector<Topology>& all_topologies();

struct PyramidParams {
    int rings = 15;
    int pitch = 0; ///< distance between consecutive rings; 0 picks (min side - 4) / 28
    double p_one = 0.25;   ///< probability of exactly one blocked corner
    double p_three = 0.25; ///< probability of exactly three blocked corners
};

struct PerlinParams {
    double density = 0.5;
    int passes = 2;
    bool out_of_bounds_blocked = true;
};

struct DivisionParams {
    double flip_probability = 0.2;
    int min_chamber = 4; ///< chambers with a side below this are not split
    int max_depth = -1;  ///< -1: unlimited
    int doors_per_wall = 1;
};

struct SymmetryParams {
    double density = 0.5;
};

struct DcaffoParams {
    double density = 0.5;
    int radius = 1; ///< structuring element is (2r+1) x (2r+1)
    /// Close the free space (true) or the blocked set (false). Closing the
    /// blocked set of 50% noise leaves almost nothing free.
    bool close_free = true;
};

struct UpfSpec {
    Topology topology = Topology::perlin;
    int width = 64;
    int height = 64;
    std::uint64_t seed = 0;
    PyramidParams pyramid;
    PerlinParams perlin;
    DivisionParams division;
    SymmetryParams symmetry;
    DcaffoParams dcaffo;
};

// --- Masked Pyramid ------------------------------------------------------

struct PyramidTrace {
    Grid grid;
    int pitch = 0;
    std::vector<int> ring_insets;           ///< distance of each ring from the border, outermost first
    std::vector<int> blocked_corner_counts; ///< per ring, in [1, 3]
};

PyramidTrace gen_masked_pyramid_traced(const UpfSpec& spec);
Grid gen_masked_pyramid(const UpfSpec& spec);

// --- Prim maze -----------------------------------------------------------

struct PrimTrace {
    Grid grid;
    std::vector<Cell> opened; ///< in opening order; opened[0] is the seed cell
};

PrimTrace gen_prim_maze_traced(const UpfSpec& spec);
Grid gen_prim_maze(const UpfSpec& spec);

// --- Perlin (cellular smoothing) ------------------------------------------

/// One synchronous majority pass: a cell becomes blocked iff more than 4 of
/// the 9 cells of its 3x3 neighborhood (itself included) are blocked.
Grid majority_smooth(const Grid& grid, bool out_of_bounds_blocked = true);
Grid gen_perlin(const UpfSpec& spec);

// --- Recursive Division ---------------------------------------------------

struct DivisionTrace {
    Grid grid;
    std::size_t wall_cells = 0;    ///< wall cells before stochastic flips (doors excluded)
    std::size_t flipped_cells = 0; ///< wall cells turned traversable by flips
    std::size_t walls = 0;
};

DivisionTrace gen_recursive_division_traced(const UpfSpec& spec);
Grid gen_recursive_division(const UpfSpec& spec);

// --- Rotational Symmetry ---------------------------------------------------

Grid gen_rotational_symmetry(const UpfSpec& spec);
/// True iff the grid equals its left-right and its top-bottom reflection.
bool is_mirror_symmetric(const Grid& grid);

// --- Dcaffo -------------------------------------------------------------------

/// Blocked-set dilation then erosion with a square structuring element;
/// out-of-bounds cells never contribute to the dilation and never prevent
/// the erosion.
Grid morphological_close(const Grid& grid, int radius = 1);
Grid invert(const Grid& grid);
Grid gen_dcaffo(const UpfSpec& spec);

Grid generate(const UpfSpec& spec);

} // namespace cfpath
