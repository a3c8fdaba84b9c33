#pragma once

// Training-map generators: Uniform, Beta and Beta-Figures noise.

#include <cstdint>
#include <string>
#include <vector>

#include "cfpath/grid.hpp"
#include "cfpath/rng.hpp"

namespace cfpath {

enum class TrainKind { uniform, beta, beta_figures };

std::string to_string(TrainKind kind);
TrainKind parse_train_kind(const std::string& name);

/// Placement of obstacle primitives for Beta-Figures. Sizes are inclusive ranges.
struct FigureParams {
    int count_min = 8;
    int count_max = 24;
    int square_side_min = 4;
    int square_side_max = 12;
    int circle_radius_min = 2;
    int circle_radius_max = 6;
    int cross_arm_min = 3;
    int cross_arm_max = 8;
    int cross_width = 2;
};

struct GenSpec {
    TrainKind kind = TrainKind::uniform;
    int width = 64;
    int height = 64;
    std::uint64_t seed = 0;
    double p = 0.5;     ///< uniform: per-cell blocked probability
    double alpha = 2.0; ///< beta / beta_figures
    double beta = 2.0;
    FigureParams figures;
};

/// Throws ConfigError on sizes below 8x8 or out-of-range parameters.
void validate(const GenSpec& spec);

Grid gen_uniform(const GenSpec& spec);
Grid gen_beta(const GenSpec& spec);
Grid gen_beta_figures(const GenSpec& spec);
Grid generate(const GenSpec& spec);

enum class FigureShape { circle, square, cross };

struct Figure {
    FigureShape shape = FigureShape::square;
    int x = 0; ///< top-left of the bounding box
    int y = 0;
    int size = 0;      ///< side, radius or arm length depending on shape
    int thickness = 2; ///< cross bar width
    std::vector<Cell> cells() const;
};

/// Intermediate masks of one Beta-Figures draw; `final` is their conjunction.
struct BetaFiguresParts {
    std::vector<Figure> figures;
    Grid figures_mask;
    Grid beta_mask;
    Grid final;
    double theta = 0.0;
};

BetaFiguresParts gen_beta_figures_parts(const GenSpec& spec);

/// Random figures fully inside a width x height map (sizes clamped to fit).
std::vector<Figure> draw_figures(int width, int height, const FigureParams& params, Rng& rng);
Grid rasterize_figures(int width, int height, const std::vector<Figure>& figures);

/// Cell-wise AND of two blocked masks of equal size.
Grid conjoin(const Grid& a, const Grid& b);

} // namespace cfpath
