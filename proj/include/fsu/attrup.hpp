#pragma once

#include "fsu/core.hpp"
#include "fsu/geoup.hpp"
#include "fsu/partition.hpp"

#include <span>
#include <vector>

namespace fsu {

/// Support samples and query points of one block, flattened onto the plane
/// orthogonal to the modeled axis.
struct ProjectedBlock
{
    std::vector<Vec2> sample_positions;
    std::array<std::vector<double>, 3> sample_colors;
    std::vector<Vec2> query_positions;
};

/// Drops z' from points already expressed in the geometry frame.
std::vector<Vec2> project(std::span<const Vec3> frame_points);

/// Rotates world points into `frame` and drops z'.
std::vector<Vec2> project(std::span<const Vec3> world_points, const AxisFrame& frame);

/// Colors for `new_points` (normalized world coordinates inside the block's
/// core) from one frequency model per RGB channel fitted over the block's
/// colored support points. Results are rounded and clamped to [0, 255].
std::vector<Rgb> upsample_block_attributes(const Block& block, const PointCloud& cloud, const AxisFrame& frame,
                                           std::span<const Vec3> new_points, const FsuConfig& cfg);

struct AttributeSplit
{
    PointCloud train;                     ///< geometry and color
    std::vector<Vec3> query_positions;    ///< geometry only
    std::vector<Rgb> query_truth_colors;  ///< held back for scoring
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> query_indices;
};

/// Seeded uniform split of a colored cloud into round(keep_fraction * n)
/// training points and query points. Both index lists are ascending.
AttributeSplit attribute_transfer_eval(const PointCloud& reference, double keep_fraction, std::uint64_t seed);

/// Colors `query_positions` from the colored `train` cloud, bypassing
/// geometry upsampling: the union of both sets is normalized and partitioned,
/// each block is framed from its training support points, and the per-channel
/// models are evaluated at the block's core query points. Blocks whose
/// support holds no training point take the nearest training color.
std::vector<Rgb> transfer_attributes(const PointCloud& train, std::span<const Vec3> query_positions,
                                     const FsuConfig& cfg, unsigned threads = 0);

} // namespace fsu
