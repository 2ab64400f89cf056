#pragma once

#include "fsu/core.hpp"
#include "fsu/delaunay.hpp"
#include "fsu/fsmodel.hpp"
#include "fsu/partition.hpp"

#include <span>
#include <vector>

namespace fsu {

enum class Axis { X = 0, Y = 1, Z = 2 };

/// Cyclic coordinate permutation that moves the modeled axis to z'.
/// source[i] is the world axis feeding primed coordinate i.
struct AxisFrame
{
    Axis modeled_axis = Axis::Z;
    std::array<int, 3> source{0, 1, 2};

    static AxisFrame modeling(Axis axis);

    Vec3 to_frame(const Vec3& p) const;
    Vec3 from_frame(const Vec3& q) const;
};

/// Picks the axis with the smallest unbiased sample variance; exact ties
/// prefer Z, then Y, then X. Throws Error("degenerate block") for < 2 points.
AxisFrame select_axis(std::span<const Vec3> points);

/// Axis-aligned planar cell in frame coordinates; the upper bound of each
/// axis is exclusive unless `closed_hi` says otherwise.
struct PlanarCell
{
    Vec2 lo{};
    Vec2 hi{};
    std::array<bool, 2> closed_hi{false, false};

    bool contains(const Vec2& p) const;
};

/// Planar core cell of `block` seen through `frame`, matching the grid's
/// ownership rule.
PlanarCell planar_core(const Block& block, const AxisFrame& frame);

/// Basis over the planar projection of the block-with-support cell.
BasisSpec planar_basis(const Block& block, const AxisFrame& frame, int max_freq);

/// Weighting centered on the planar core center; the spatial weight reaches
/// rho at half the support diagonal.
WeightingSpec planar_weighting(const Block& block, const AxisFrame& frame, const FsuConfig& cfg);

/// Sorted seeded uniform subsample of `count` indices out of [0, n).
std::vector<std::size_t> seeded_subsample(std::size_t n, std::size_t count, std::uint64_t seed);

/// Midpoints of the triangulation edges that fall inside `cell`, without
/// duplicates (1e-9). When more than `target_count` remain a seeded uniform
/// subsample of that size is returned, preserving candidate order.
std::vector<Vec2> new_planar_positions(const Triangulation2D& tri, const PlanarCell& cell, std::size_t target_count,
                                       std::uint64_t seed);

struct GeometryResult
{
    AxisFrame frame;
    SparseModel model;
    std::vector<Vec3> new_points; ///< normalized world coordinates, inside the core cell
};

/// Fits z' = f(x', y') over the block's support points and samples the fit at
/// Delaunay edge midpoints inside the core. At most `target_count` points are
/// produced. Blocks with fewer than 3 support points or no usable
/// triangulation contribute nothing.
GeometryResult upsample_block_geometry(const Block& block, const PointCloud& cloud, const FsuConfig& cfg,
                                       std::size_t target_count);

/// Same, with the block's own share round((scale_factor - 1) * |core|).
GeometryResult upsample_block_geometry(const Block& block, const PointCloud& cloud, const FsuConfig& cfg);

/// Per-block insertion targets summing to round((scale_factor - 1) * n):
/// block b receives the difference of the rounded running totals of
/// (scale_factor - 1) * |core| before and after it.
std::vector<std::size_t> allocate_targets(std::span<const Block> blocks, double scale_factor);

/// Per-block seed derived from the global seed and the block id.
std::uint64_t block_seed(std::uint64_t seed, const BlockId& id);

} // namespace fsu
