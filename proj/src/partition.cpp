#include "fsu/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fsu {

BlockGrid::BlockGrid(double block_size, double support_margin) : size_(block_size), margin_(support_margin)
{
    if (!(block_size > 0.0) || !std::isfinite(block_size))
        throw Error("block size must be positive");
    if (!(support_margin >= 0.0) || !std::isfinite(support_margin))
        throw Error("support margin must be nonnegative");
    cells_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(1.0 / block_size - 1e-9)));
}

std::int64_t BlockGrid::cell_index(double coord) const
{
    auto i = static_cast<std::int64_t>(std::floor(coord / size_));
    if (coord < cell_min(i))
        --i;
    else if (coord >= cell_max(i))
        ++i;
    return std::clamp<std::int64_t>(i, 0, cells_ - 1);
}

namespace {

double upper_bound_of(const BlockGrid& g, std::int64_t i)
{
    const double hi = g.cell_max(i);
    return i == g.cells_per_axis() - 1 ? std::max(hi, 1.0) : hi;
}

} // namespace

bool BlockGrid::in_core(double coord, std::int64_t i) const
{
    if (coord < cell_min(i))
        return false;
    if (i == cells_ - 1)
        return coord <= upper_bound_of(*this, i);
    return coord < cell_max(i);
}

bool BlockGrid::in_core(const Vec3& p, const BlockId& id) const
{
    return in_core(p[0], id[0]) && in_core(p[1], id[1]) && in_core(p[2], id[2]);
}

bool BlockGrid::in_support(double coord, std::int64_t i) const
{
    return coord >= cell_min(i) - margin_ && coord <= upper_bound_of(*this, i) + margin_;
}

bool BlockGrid::in_support(const Vec3& p, const BlockId& id) const
{
    return in_support(p[0], id[0]) && in_support(p[1], id[1]) && in_support(p[2], id[2]);
}

Vec3 Block::core_max() const
{
    return {core_min[0] + block_size, core_min[1] + block_size, core_min[2] + block_size};
}

Vec3 Block::support_min() const
{
    return {core_min[0] - support_margin, core_min[1] - support_margin, core_min[2] - support_margin};
}

Vec3 Block::support_max() const
{
    const double e = block_size + support_margin;
    return {core_min[0] + e, core_min[1] + e, core_min[2] + e};
}

std::vector<Block> partition(const PointCloud& cloud, double block_size, double support_margin)
{
    const BlockGrid grid(block_size, support_margin);

    std::map<BlockId, Block> blocks;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto& p = cloud.positions[i];
        const BlockId id{grid.cell_index(p[0]), grid.cell_index(p[1]), grid.cell_index(p[2])};
        auto [it, inserted] = blocks.try_emplace(id);
        if (inserted) {
            Block& b = it->second;
            b.id = id;
            b.core_min = {grid.cell_min(id[0]), grid.cell_min(id[1]), grid.cell_min(id[2])};
            b.block_size = block_size;
            b.support_margin = support_margin;
        }
        it->second.core_point_indices.push_back(i);
    }

    // Candidate cells along one axis whose support interval may contain c.
    const auto span = [&](double c) {
        const auto lo = static_cast<std::int64_t>(std::floor((c - support_margin) / block_size)) - 1;
        const auto hi = static_cast<std::int64_t>(std::floor((c + support_margin) / block_size)) + 1;
        return std::pair{std::max<std::int64_t>(lo, 0), std::min<std::int64_t>(hi, grid.cells_per_axis() - 1)};
    };

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto& p = cloud.positions[i];
        const auto [x0, x1] = span(p[0]);
        const auto [y0, y1] = span(p[1]);
        const auto [z0, z1] = span(p[2]);
        for (auto x = x0; x <= x1; ++x) {
            if (!grid.in_support(p[0], x))
                continue;
            for (auto y = y0; y <= y1; ++y) {
                if (!grid.in_support(p[1], y))
                    continue;
                for (auto z = z0; z <= z1; ++z) {
                    if (!grid.in_support(p[2], z))
                        continue;
                    auto it = blocks.find(BlockId{x, y, z});
                    if (it != blocks.end())
                        it->second.support_point_indices.push_back(i);
                }
            }
        }
    }

    std::vector<Block> out;
    out.reserve(blocks.size());
    for (auto& [id, b] : blocks)
        out.push_back(std::move(b));
    return out;
}

PointCloud merge_block_outputs(const PointCloud& original, std::vector<BlockOutput> outputs)
{
    constexpr double slack = 1e-9;

    for (const auto& out : outputs)
        if (!out.block)
            throw Error("block output without a block");
    std::sort(outputs.begin(), outputs.end(),
              [](const BlockOutput& a, const BlockOutput& b) { return a.block->id < b.block->id; });

    PointCloud merged = original;
    for (const auto& out : outputs) {
        const Block& b = *out.block;
        const Vec3 hi = b.core_max();
        for (const auto& p : out.new_points)
            for (int a = 0; a < 3; ++a)
                if (p[a] < b.core_min[a] - slack || p[a] > hi[a] + slack)
                    throw Error("internal consistency error: new point outside its core cell");

        if (merged.has_colors()) {
            if (out.new_colors.size() != out.new_points.size())
                throw Error("internal consistency error: new points lack colors");
            merged.colors->insert(merged.colors->end(), out.new_colors.begin(), out.new_colors.end());
        }
        merged.positions.insert(merged.positions.end(), out.new_points.begin(), out.new_points.end());
    }
    return merged;
}

} // namespace fsu
