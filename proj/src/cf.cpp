#include "cfpath/cf.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace cfpath {

CfField::CfField(int width, int height, std::vector<double> cf, Mask mask)
    : width_(width), height_(height), cf_(std::move(cf)), mask_(std::move(mask)) {
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (width < 1 || height < 1 || cf_.size() != n || mask_.size() != n) {
        throw ContractError("cf field size does not match dimensions");
    }
}

Mask build_mask(const Grid& grid, Cell goal) {
    if (!grid.in_bounds(goal)) {
        throw ContractError("build_mask: goal " + to_string(goal) + " is out of bounds");
    }
    Mask mask(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        mask[i] = grid.blocked(i) ? 0 : 1;
    }
    mask[grid.index(goal)] = 0;
    return mask;
}

CfField cf_target(const Grid& grid, Cell goal, const MoveModel& model) {
    return cf_target(grid, goal, dijkstra_field(grid, goal, model));
}

CfField cf_target(const Grid& grid, Cell goal, const CostField& field) {
    require_free(grid, goal, "cf_target goal");
    if (field.width() != grid.width() || field.height() != grid.height()) {
        throw ContractError("cf_target: cost field does not match grid");
    }
    Mask mask = build_mask(grid, goal);
    std::vector<double> cf(grid.size(), 1.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!mask[i]) {
            continue;
        }
        const double hstar = field.at(i);
        cf[i] = hstar == kInfinity ? 0.0 : octile(grid.cell(i), goal) / hstar;
    }
    return CfField(grid.width(), grid.height(), std::move(cf), std::move(mask));
}

HeuristicFn h_from_cf(const CfField& cf, Cell goal) {
    if (goal.x < 0 || goal.y < 0 || goal.x >= cf.width() || goal.y >= cf.height()) {
        throw ContractError("h_from_cf: goal " + to_string(goal) + " lies outside the cf field");
    }
    std::vector<double> floored(cf.size());
    std::transform(cf.values().begin(), cf.values().end(), floored.begin(),
                   [](double v) { return std::max(v, kCfEpsilon); });
    return [floored = std::move(floored), goal, width = static_cast<std::size_t>(cf.width())](Cell c) {
        return octile(c, goal) /
               floored[static_cast<std::size_t>(c.y) * width + static_cast<std::size_t>(c.x)];
    };
}

HeuristicFn h_from_cf(const CfField& cf, const Grid& grid, Cell goal) {
    if (cf.width() != grid.width() || cf.height() != grid.height()) {
        throw ContractError("h_from_cf: cf field is " + std::to_string(cf.width()) + "x" +
                            std::to_string(cf.height()) + " but grid is " +
                            std::to_string(grid.width()) + "x" + std::to_string(grid.height()));
    }
    return h_from_cf(cf, goal);
}

namespace {

constexpr char kMagic[4] = {'C', 'F', 'M', '1'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
    }
}

std::uint32_t get_u32(const std::string& in, std::size_t pos) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos + static_cast<std::size_t>(i)]))
             << (8 * i);
    }
    return v;
}

} // namespace

std::string encode_cf(const CfField& field) {
    std::string out;
    out.reserve(12 + field.size() * 5);
    out.append(kMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(field.width()));
    put_u32(out, static_cast<std::uint32_t>(field.height()));
    for (double v : field.values()) {
        put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
    for (auto m : field.mask()) {
        out.push_back(m ? 1 : 0);
    }
    return out;
}

CfField decode_cf(const std::string& bytes) {
    if (bytes.size() < 12) {
        throw FormatError("cf map: truncated header");
    }
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw FormatError("cf map: bad magic");
    }
    const std::uint32_t width = get_u32(bytes, 4);
    const std::uint32_t height = get_u32(bytes, 8);
    if (width == 0 || height == 0 || width > static_cast<std::uint32_t>(std::numeric_limits<int>::max()) ||
        height > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) {
        throw FormatError("cf map: invalid dimensions");
    }
    const std::uint64_t cells = static_cast<std::uint64_t>(width) * height;
    // 5 bytes per cell; anything that cannot fit in the buffer is rejected
    // before we multiply further.
    if (cells > (bytes.size() - 12) / 5 + 1) {
        throw FormatError("cf map: dimensions exceed file size");
    }
    const std::uint64_t expected = 12 + cells * 5;
    if (bytes.size() != expected) {
        throw FormatError("cf map: expected " + std::to_string(expected) + " bytes, found " +
                          std::to_string(bytes.size()));
    }
    const auto n = static_cast<std::size_t>(cells);
    std::vector<double> cf(n);
    for (std::size_t i = 0; i < n; ++i) {
        const float v = std::bit_cast<float>(get_u32(bytes, 12 + 4 * i));
        if (!(v >= -kCfRangeSlack && v <= 1.0 + kCfRangeSlack)) {
            throw FormatError("cf map: value out of range at cell " + std::to_string(i));
        }
        cf[i] = static_cast<double>(v);
    }
    Mask mask(n);
    const std::size_t mask_at = 12 + 4 * n;
    for (std::size_t i = 0; i < n; ++i) {
        const auto b = static_cast<unsigned char>(bytes[mask_at + i]);
        if (b > 1) {
            throw FormatError("cf map: mask byte must be 0 or 1 at cell " + std::to_string(i));
        }
        mask[i] = b;
    }
    return CfField(static_cast<int>(width), static_cast<int>(height), std::move(cf), std::move(mask));
}

void write_cf(const std::string& path, const CfField& field) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write cf map " + path);
    }
    const auto bytes = encode_cf(field);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

CfField read_cf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open cf map " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return decode_cf(buf.str());
    } catch (const FormatError& e) {
        throw FormatError(std::string(e.what()) + " (" + path + ")");
    }
}

} // namespace cfpath
