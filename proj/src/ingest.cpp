#include "cfpath/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cfpath {

std::string to_string(SourceKind kind) {
    switch (kind) {
    case SourceKind::baldurs_gate:
        return "baldurs_gate";
    case SourceKind::moving_street:
        return "moving_street";
    case SourceKind::house_expo:
        return "house_expo";
    case SourceKind::tmp:
        return "tmp";
    }
    return "unknown";
}

SourceKind parse_source_kind(const std::string& name) {
    for (auto k : {SourceKind::baldurs_gate, SourceKind::moving_street, SourceKind::house_expo,
                   SourceKind::tmp}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw ConfigError("unknown source kind '" + name + "'");
}

std::string to_string(DownsampleRule rule) {
    switch (rule) {
    case DownsampleRule::majority:
        return "majority";
    case DownsampleRule::any:
        return "any";
    case DownsampleRule::center:
        return "center";
    }
    return "unknown";
}

DownsampleRule parse_downsample_rule(const std::string& name) {
    if (name == "majority") return DownsampleRule::majority;
    if (name == "any") return DownsampleRule::any;
    if (name == "center") return DownsampleRule::center;
    throw ConfigError("unknown downsample rule '" + name + "'");
}

Grid downsample(const Grid& grid, int factor, DownsampleRule rule) {
    if (factor < 2) {
        throw ContractError("downsample: factor must be >= 2");
    }
    if (grid.width() % factor != 0 || grid.height() % factor != 0) {
        throw ContractError("downsample: " + std::to_string(grid.width()) + "x" +
                            std::to_string(grid.height()) + " is not divisible by " +
                            std::to_string(factor));
    }
    const int w = grid.width() / factor;
    const int h = grid.height() / factor;
    const int block = factor * factor;
    std::vector<std::uint8_t> out(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    for (int by = 0; by < h; ++by) {
        for (int bx = 0; bx < w; ++bx) {
            bool blocked = false;
            if (rule == DownsampleRule::center) {
                blocked = grid.blocked(Cell{bx * factor + factor / 2, by * factor + factor / 2});
            } else {
                int count = 0;
                for (int dy = 0; dy < factor; ++dy) {
                    for (int dx = 0; dx < factor; ++dx) {
                        count += grid.blocked(Cell{bx * factor + dx, by * factor + dy}) ? 1 : 0;
                    }
                }
                blocked = rule == DownsampleRule::any ? count > 0 : 2 * count >= block;
            }
            out[static_cast<std::size_t>(by) * static_cast<std::size_t>(w) + static_cast<std::size_t>(bx)] =
                blocked ? 1 : 0;
        }
    }
    return Grid(w, h, std::move(out));
}

Grid rotate90(const Grid& grid, int quarter_turns) {
    const int turns = ((quarter_turns % 4) + 4) % 4;
    Grid cur = grid;
    for (int t = 0; t < turns; ++t) {
        const int w = cur.width();
        const int h = cur.height();
        // Clockwise: new width = h; source (x, y) lands at (h - 1 - y, x).
        std::vector<std::uint8_t> out(cur.size());
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const int nx = h - 1 - y;
                const int ny = x;
                out[static_cast<std::size_t>(ny) * static_cast<std::size_t>(h) + static_cast<std::size_t>(nx)] =
                    cur.blocked(Cell{x, y}) ? 1 : 0;
            }
        }
        cur = Grid(h, w, std::move(out));
    }
    return cur;
}

Grid crop(const Grid& grid, int x, int y, int width, int height) {
    if (x < 0 || y < 0 || width < 1 || height < 1 || x + width > grid.width() ||
        y + height > grid.height()) {
        throw ContractError("crop window lies outside the source map");
    }
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (int dy = 0; dy < height; ++dy) {
        for (int dx = 0; dx < width; ++dx) {
            out.push_back(grid.blocked(Cell{x + dx, y + dy}) ? 1 : 0);
        }
    }
    return Grid(width, height, std::move(out));
}

Grid pad_blocked(const Grid& grid, int width, int height) {
    if (grid.width() > width || grid.height() > height) {
        throw ContractError("pad_blocked: map is larger than the target frame");
    }
    const int ox = (width - grid.width()) / 2;
    const int oy = (height - grid.height()) / 2;
    std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 1);
    for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) {
            out[static_cast<std::size_t>(y + oy) * static_cast<std::size_t>(width) +
                static_cast<std::size_t>(x + ox)] = grid.blocked(Cell{x, y}) ? 1 : 0;
        }
    }
    return Grid(width, height, std::move(out));
}

Grid parse_pgm(const std::string& bytes, int threshold) {
    std::size_t pos = 0;
    // Header tokens are separated by whitespace; '#' starts a comment line.
    const auto next_token = [&]() {
        for (;;) {
            while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) {
                ++pos;
            }
            if (pos < bytes.size() && bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') {
                    ++pos;
                }
                continue;
            }
            break;
        }
        const std::size_t start = pos;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
            ++pos;
        }
        return bytes.substr(start, pos - start);
    };
    if (next_token() != "P5") {
        throw ParseError(1, "raster: expected binary PGM (P5)");
    }
    int width = 0;
    int height = 0;
    int maxval = 0;
    try {
        width = std::stoi(next_token());
        height = std::stoi(next_token());
        maxval = std::stoi(next_token());
    } catch (const std::exception&) {
        throw ParseError(1, "raster: malformed PGM header");
    }
    if (width < 1 || height < 1 || maxval < 1 || maxval > 255) {
        throw ParseError(1, "raster: unsupported PGM dimensions or maxval");
    }
    ++pos; // single whitespace byte before the raster
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() < pos + n) {
        throw ParseError(1, "raster: truncated pixel data");
    }
    std::vector<std::uint8_t> cells(n);
    for (std::size_t i = 0; i < n; ++i) {
        cells[i] = static_cast<unsigned char>(bytes[pos + i]) >= threshold ? 0 : 1;
    }
    return Grid(width, height, std::move(cells));
}

std::vector<SourceMap> load_sources(const std::string& dir, MapAlphabet alphabet) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw ConfigError("source directory " + dir + " does not exist");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<SourceMap> out;
    for (const auto& f : files) {
        if (f.extension() == ".pgm") {
            std::ifstream in(f, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            out.push_back({f.filename().string(), parse_pgm(buf.str())});
        } else if (f.extension() == ".map") {
            out.push_back({f.filename().string(), load_map(f.string(), alphabet)});
        }
    }
    if (out.empty()) {
        throw ConfigError("source directory " + dir + " holds no .map or .pgm files");
    }
    return out;
}

Grid fit_house_expo(const Grid& grid, int size, DownsampleRule rule, int* factor_out) {
    Grid cur = grid;
    int factor = 1;
    if (grid.width() > size || grid.height() > size) {
        factor = 2;
        while ((grid.width() + factor - 1) / factor > size || (grid.height() + factor - 1) / factor > size) {
            ++factor;
        }
        const int pw = (grid.width() + factor - 1) / factor * factor;
        const int ph = (grid.height() + factor - 1) / factor * factor;
        cur = downsample(pad_blocked(grid, pw, ph), factor, rule);
    }
    if (factor_out != nullptr) {
        *factor_out = factor;
    }
    return pad_blocked(cur, size, size);
}

namespace {

bool has_free_cell(const Grid& g) {
    return g.free_count() > 0;
}

template <typename Draw>
std::vector<IngestOutput> run_draws(const IngestConfig& config, Draw draw) {
    if (config.count < 0 || config.size < 1) {
        throw ConfigError("ingest: size must be positive and count non-negative");
    }
    std::vector<IngestOutput> outputs;
    outputs.reserve(static_cast<std::size_t>(config.count));
    for (int i = 0; i < config.count; ++i) {
        Rng rng(config.seed + static_cast<std::uint64_t>(i));
        int rejected = 0;
        for (;;) {
            IngestOutput out = draw(rng);
            if (has_free_cell(out.grid)) {
                out.record.rejected_draws = rejected;
                outputs.push_back(std::move(out));
                break;
            }
            if (++rejected >= config.max_attempts) {
                throw ConfigError("ingest: output " + std::to_string(i) + " stayed fully blocked after " +
                                  std::to_string(rejected) + " draws (last source " + out.record.source + ")");
            }
        }
    }
    return outputs;
}

} // namespace

std::vector<IngestOutput> ingest_baldurs_gate(const std::vector<SourceMap>& sources, IngestConfig config) {
    const int side = config.baldurs_gate_side;
    for (const auto& s : sources) {
        if (s.grid.width() != side || s.grid.height() != side) {
            throw ConfigError("baldurs_gate: " + s.name + " is " + std::to_string(s.grid.width()) + "x" +
                              std::to_string(s.grid.height()) + ", expected " + std::to_string(side) +
                              "x" + std::to_string(side));
        }
    }
    if (side % config.size != 0) {
        throw ConfigError("baldurs_gate: source side " + std::to_string(side) +
                          " is not a multiple of the target size");
    }
    const int factor = side / config.size;
    return run_draws(config, [&](Rng& rng) {
        const auto& src = sources[static_cast<std::size_t>(rng.below(sources.size()))];
        const int turns = static_cast<int>(rng.below(4));
        Grid g = factor == 1 ? src.grid : downsample(src.grid, factor, config.rule);
        g = rotate90(g, turns);
        return IngestOutput{std::move(g), {src.name, 0, 0, 90 * turns, factor, 0}};
    });
}

std::vector<IngestOutput> ingest_moving_street(const std::vector<SourceMap>& sources, IngestConfig config) {
    const int window = 2 * config.size;
    for (const auto& s : sources) {
        if (s.grid.width() < window || s.grid.height() < window) {
            throw ConfigError("moving_street: " + s.name + " is smaller than the " +
                              std::to_string(window) + "x" + std::to_string(window) + " crop window");
        }
    }
    return run_draws(config, [&](Rng& rng) {
        const auto& src = sources[static_cast<std::size_t>(rng.below(sources.size()))];
        const int x = rng.range(0, src.grid.width() - window);
        const int y = rng.range(0, src.grid.height() - window);
        Grid g = downsample(crop(src.grid, x, y, window, window), 2, config.rule);
        return IngestOutput{std::move(g), {src.name, x, y, 0, 2, 0}};
    });
}

std::vector<IngestOutput> ingest_house_expo(const std::vector<SourceMap>& sources, IngestConfig config) {
    return run_draws(config, [&](Rng& rng) {
        const auto& src = sources[static_cast<std::size_t>(rng.below(sources.size()))];
        int factor = 1;
        Grid g = fit_house_expo(src.grid, config.size, config.rule, &factor);
        return IngestOutput{std::move(g), {src.name, 0, 0, 0, factor, 0}};
    });
}

std::vector<IngestOutput> ingest_tmp(const std::vector<SourceMap>& sources, IngestConfig config) {
    for (const auto& s : sources) {
        if (s.grid.width() != config.size || s.grid.height() != config.size) {
            throw ConfigError("tmp: " + s.name + " is " + std::to_string(s.grid.width()) + "x" +
                              std::to_string(s.grid.height()) + ", expected " +
                              std::to_string(config.size) + "x" + std::to_string(config.size));
        }
        if (!has_free_cell(s.grid)) {
            throw ConfigError("tmp: " + s.name + " has no free cell");
        }
    }
    if (static_cast<std::size_t>(config.count) > sources.size()) {
        throw ConfigError("tmp: requested " + std::to_string(config.count) + " maps but only " +
                          std::to_string(sources.size()) + " sources exist");
    }
    // Sampling without replacement: a seeded shuffle of the source list.
    std::vector<std::size_t> order(sources.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    Rng rng(config.seed);
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);
    }
    std::vector<IngestOutput> outputs;
    for (int i = 0; i < config.count; ++i) {
        const auto& src = sources[order[static_cast<std::size_t>(i)]];
        outputs.push_back({src.grid, {src.name, 0, 0, 0, 1, 0}});
    }
    return outputs;
}

std::vector<IngestOutput> ingest(const std::vector<SourceMap>& sources, const IngestConfig& config) {
    if (sources.empty()) {
        throw ConfigError("ingest: no source maps");
    }
    switch (config.kind) {
    case SourceKind::baldurs_gate:
        return ingest_baldurs_gate(sources, config);
    case SourceKind::moving_street:
        return ingest_moving_street(sources, config);
    case SourceKind::house_expo:
        return ingest_house_expo(sources, config);
    case SourceKind::tmp:
        return ingest_tmp(sources, config);
    }
    throw ConfigError("ingest: unknown source kind");
}

} // namespace cfpath
