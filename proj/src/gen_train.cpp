#include "cfpath/gen_train.hpp"

#include <algorithm>

namespace cfpath {

std::string to_string(TrainKind kind) {
    switch (kind) {
    case TrainKind::uniform:
        return "uniform";
    case TrainKind::beta:
        return "beta";
    case TrainKind::beta_figures:
        return "beta_figures";
    }
    return "unknown";
}

TrainKind parse_train_kind(const std::string& name) {
    if (name == "uniform") return TrainKind::uniform;
    if (name == "beta") return TrainKind::beta;
    if (name == "beta_figures" || name == "beta-figures") return TrainKind::beta_figures;
    throw ConfigError("unknown training map kind '" + name + "'");
}

void validate(const GenSpec& spec) {
    if (spec.width < 8 || spec.height < 8) {
        throw ConfigError("training maps must be at least 8x8");
    }
    if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
        throw ConfigError("uniform p must lie in [0, 1]");
    }
    if (!(spec.alpha > 0.0) || !(spec.beta > 0.0)) {
        throw ConfigError("beta parameters must be positive");
    }
    const auto& f = spec.figures;
    if (f.count_min < 0 || f.count_max < f.count_min || f.square_side_min < 1 ||
        f.square_side_max < f.square_side_min || f.circle_radius_min < 0 ||
        f.circle_radius_max < f.circle_radius_min || f.cross_arm_min < 0 ||
        f.cross_arm_max < f.cross_arm_min || f.cross_width < 1) {
        throw ConfigError("invalid figure parameters");
    }
}

namespace {

Grid bernoulli_grid(int width, int height, double p, Rng& rng) {
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (auto& c : cells) {
        c = rng.bernoulli(p) ? 1 : 0;
    }
    return Grid(width, height, std::move(cells));
}

int bbox_side(FigureShape shape, int size, int cross_width) {
    switch (shape) {
    case FigureShape::circle:
        return 2 * size + 1;
    case FigureShape::square:
        return size;
    case FigureShape::cross:
        return 2 * size + cross_width;
    }
    return size;
}

} // namespace

std::vector<Cell> Figure::cells() const {
    std::vector<Cell> out;
    switch (shape) {
    case FigureShape::square:
        for (int dy = 0; dy < size; ++dy)
            for (int dx = 0; dx < size; ++dx)
                out.push_back({x + dx, y + dy});
        break;
    case FigureShape::circle:
        for (int dy = -size; dy <= size; ++dy)
            for (int dx = -size; dx <= size; ++dx)
                if (dx * dx + dy * dy <= size * size)
                    out.push_back({x + size + dx, y + size + dy});
        break;
    case FigureShape::cross: {
        const int w = thickness;
        const int side = 2 * size + w;
        for (int dy = 0; dy < side; ++dy)
            for (int dx = 0; dx < side; ++dx) {
                const bool horizontal = dy >= size && dy < size + w;
                const bool vertical = dx >= size && dx < size + w;
                if (horizontal || vertical)
                    out.push_back({x + dx, y + dy});
            }
        break;
    }
    }
    return out;
}

std::vector<Figure> draw_figures(int width, int height, const FigureParams& params, Rng& rng) {
    const int limit = std::min(width, height);
    const int count = rng.range(params.count_min, params.count_max);
    std::vector<Figure> figures;
    figures.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Figure fig;
        fig.thickness = params.cross_width;
        switch (rng.below(3)) {
        case 0:
            fig.shape = FigureShape::circle;
            fig.size = std::min(rng.range(params.circle_radius_min, params.circle_radius_max),
                                (limit - 1) / 2);
            break;
        case 1:
            fig.shape = FigureShape::square;
            fig.size = std::min(rng.range(params.square_side_min, params.square_side_max), limit);
            break;
        default:
            fig.shape = FigureShape::cross;
            fig.size = std::min(rng.range(params.cross_arm_min, params.cross_arm_max),
                                (limit - params.cross_width) / 2);
            break;
        }
        const int side = bbox_side(fig.shape, fig.size, params.cross_width);
        fig.x = rng.range(0, width - side);
        fig.y = rng.range(0, height - side);
        figures.push_back(fig);
    }
    return figures;
}

Grid rasterize_figures(int width, int height, const std::vector<Figure>& figures) {
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
    for (const auto& fig : figures) {
        for (Cell c : fig.cells()) {
            if (c.x >= 0 && c.y >= 0 && c.x < width && c.y < height) {
                cells[static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(c.x)] = 1;
            }
        }
    }
    return Grid(width, height, std::move(cells));
}

Grid conjoin(const Grid& a, const Grid& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw ContractError("conjoin: mask sizes differ");
    }
    std::vector<std::uint8_t> cells(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        cells[i] = (a.blocked(i) && b.blocked(i)) ? 1 : 0;
    }
    return Grid(a.width(), a.height(), std::move(cells));
}

Grid gen_uniform(const GenSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    return bernoulli_grid(spec.width, spec.height, spec.p, rng);
}

Grid gen_beta(const GenSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    const double theta = rng.beta(spec.alpha, spec.beta);
    return bernoulli_grid(spec.width, spec.height, theta, rng);
}

BetaFiguresParts gen_beta_figures_parts(const GenSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    auto figures = draw_figures(spec.width, spec.height, spec.figures, rng);
    Grid figures_mask = rasterize_figures(spec.width, spec.height, figures);
    const double theta = rng.beta(spec.alpha, spec.beta);
    Grid beta_mask = bernoulli_grid(spec.width, spec.height, theta, rng);
    Grid final = conjoin(figures_mask, beta_mask);
    return {std::move(figures), std::move(figures_mask), std::move(beta_mask), std::move(final), theta};
}

Grid gen_beta_figures(const GenSpec& spec) {
    return gen_beta_figures_parts(spec).final;
}

Grid generate(const GenSpec& spec) {
    switch (spec.kind) {
    case TrainKind::uniform:
        return gen_uniform(spec);
    case TrainKind::beta:
        return gen_beta(spec);
    case TrainKind::beta_figures:
        return gen_beta_figures(spec);
    }
    throw ConfigError("unknown training map kind");
}

} // namespace cfpath
