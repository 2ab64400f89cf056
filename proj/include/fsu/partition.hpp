#pragma once

#include "fsu/core.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace fsu {

using BlockId = std::array<std::int64_t, 3>;

/// Regular cubic grid over the normalized unit cube. Cell i along an axis
/// covers [i*N, (i+1)*N); the last cell is closed so that coordinate 1.0 has
/// an owner.
class BlockGrid
{
public:
    BlockGrid(double block_size, double support_margin);

    double block_size() const { return size_; }
    double support_margin() const { return margin_; }
    std::int64_t cells_per_axis() const { return cells_; }

    double cell_min(std::int64_t i) const { return static_cast<double>(i) * size_; }
    double cell_max(std::int64_t i) const { return static_cast<double>(i + 1) * size_; }

    /// Owning cell along one axis. Consistent with `in_core` by construction.
    std::int64_t cell_index(double coord) const;

    /// Half-open core membership along one axis (closed for the last cell).
    bool in_core(double coord, std::int64_t i) const;
    bool in_core(const Vec3& p, const BlockId& id) const;

    /// Closed support interval [min - M, max + M] along one axis.
    bool in_support(double coord, std::int64_t i) const;
    bool in_support(const Vec3& p, const BlockId& id) const;

private:
    double size_;
    double margin_;
    std::int64_t cells_;
};

struct Block
{
    BlockId id{};
    Vec3 core_min{};
    double block_size = 0.0;
    double support_margin = 0.0;
    std::vector<std::size_t> core_point_indices;    ///< ascending
    std::vector<std::size_t> support_point_indices; ///< ascending, includes the core

    Vec3 core_max() const;
    Vec3 support_min() const;
    Vec3 support_max() const;
};

/// Assigns every point to exactly one core block and collects each block's
/// overlapped support. Blocks come back sorted by id; blocks with an empty
/// core are not emitted. `cloud` must already be normalized.
std::vector<Block> partition(const PointCloud& cloud, double block_size, double support_margin);

struct BlockOutput
{
    const Block* block = nullptr;
    std::vector<Vec3> new_points;
    std::vector<Rgb> new_colors; ///< empty, or one per new point
};

/// Appends every block's new points to `original` in ascending block id order,
/// independent of the order of `outputs`. Throws Error if a new point lies
/// outside its block's core cell or color counts are inconsistent.
PointCloud merge_block_outputs(const PointCloud& original, std::vector<BlockOutput> outputs);

} // namespace fsu
