#pragma once

// Conversion of externally supplied maps (Baldur's Gate, Moving Street,
// HouseExpo, TMP) to the target resolution.

#include <cstdint>
#include <string>
#include <vector>

#include "cfpath/grid.hpp"
#include "cfpath/rng.hpp"

namespace cfpath {

enum class SourceKind { baldurs_gate, moving_street, house_expo, tmp };

std::string to_string(SourceKind kind);
SourceKind parse_source_kind(const std::string& name);

/// How a factor x factor block collapses to one cell.
enum class DownsampleRule {
    majority, ///< blocked iff at least half the block is blocked
    any,      ///< blocked iff any cell of the block is blocked
    center,   ///< copies the block's center cell (factor / 2, factor / 2)
};

std::string to_string(DownsampleRule rule);
DownsampleRule parse_downsample_rule(const std::string& name);

Grid downsample(const Grid& grid, int factor, DownsampleRule rule = DownsampleRule::majority);

/// Clockwise rotation by quarter_turns * 90 degrees.
Grid rotate90(const Grid& grid, int quarter_turns);

/// Sub-rectangle [x, x + width) x [y, y + height).
Grid crop(const Grid& grid, int x, int y, int width, int height);

/// Centers `grid` in a width x height frame of blocked cells (odd remainders
/// go to the right / bottom). Throws ContractError if it does not fit.
Grid pad_blocked(const Grid& grid, int width, int height);

struct SourceMap {
    std::string name; ///< file name, recorded in manifests
    Grid grid;
};

/// Loads every regular file of `dir` in lexicographic order. Files ending in
/// .pgm are read as binary 8-bit rasters (value >= 128 free); everything else
/// must be map text.
std::vector<SourceMap> load_sources(const std::string& dir, MapAlphabet alphabet = MapAlphabet::extended);

/// Binary PGM ("P5", maxval <= 255), occupancy-image convention: pixels at or
/// above `threshold` are free, darker pixels are walls.
Grid parse_pgm(const std::string& bytes, int threshold = 128);

struct IngestConfig {
    SourceKind kind = SourceKind::baldurs_gate;
    int size = 64;
    int count = 1;
    std::uint64_t seed = 0;
    DownsampleRule rule = DownsampleRule::majority;
    int baldurs_gate_side = 512;
    int max_attempts = 100; ///< draws per output before giving up on fully blocked results
};

/// Provenance of one output map.
struct IngestRecord {
    std::string source;
    int crop_x = 0;
    int crop_y = 0;
    int rotation = 0; ///< degrees, clockwise, applied after downsampling
    int factor = 1;
    int rejected_draws = 0; ///< fully blocked draws skipped before this one
};

struct IngestOutput {
    Grid grid;
    IngestRecord record;
};

/// Output i draws from Rng(seed + i). Throws ConfigError on source
/// dimension violations or when an output cannot avoid being fully blocked.
std::vector<IngestOutput> ingest(const std::vector<SourceMap>& sources, const IngestConfig& config);

std::vector<IngestOutput> ingest_baldurs_gate(const std::vector<SourceMap>& sources, IngestConfig config);
std::vector<IngestOutput> ingest_moving_street(const std::vector<SourceMap>& sources, IngestConfig config);
std::vector<IngestOutput> ingest_house_expo(const std::vector<SourceMap>& sources, IngestConfig config);
std::vector<IngestOutput> ingest_tmp(const std::vector<SourceMap>& sources, IngestConfig config);

/// HouseExpo resize: downsample by the smallest integer factor that brings
/// both sides within `size` (after blocked padding to a multiple of the
/// factor), then pad with blocked cells to size x size. Returns the factor
/// used through `factor_out` when non-null.
Grid fit_house_expo(const Grid& grid, int size, DownsampleRule rule, int* factor_out = nullptr);

} // namespace cfpath
