#include "fsu/geoup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace fsu {

namespace {

constexpr double kCoreSlack = 1e-9;

} // namespace

AxisFrame AxisFrame::modeling(Axis axis)
{
    AxisFrame f;
    f.modeled_axis = axis;
    switch (axis) {
    case Axis::X: f.source = {1, 2, 0}; break;
    case Axis::Y: f.source = {2, 0, 1}; break;
    case Axis::Z: f.source = {0, 1, 2}; break;
    }
    return f;
}

Vec3 AxisFrame::to_frame(const Vec3& p) const
{
    return {p[source[0]], p[source[1]], p[source[2]]};
}

Vec3 AxisFrame::from_frame(const Vec3& q) const
{
    Vec3 p{};
    for (int i = 0; i < 3; ++i)
        p[source[i]] = q[i];
    return p;
}

AxisFrame select_axis(std::span<const Vec3> points)
{
    if (points.size() < 2)
        throw Error("degenerate block");

    const double n = static_cast<double>(points.size());
    std::array<double, 3> var{};
    for (int a = 0; a < 3; ++a) {
        double mean = 0.0;
        for (const auto& p : points)
            mean += p[a];
        mean /= n;
        double ss = 0.0;
        for (const auto& p : points)
            ss += (p[a] - mean) * (p[a] - mean);
        var[a] = ss / (n - 1.0);
    }

    Axis best = Axis::Z;
    for (Axis a : {Axis::Y, Axis::X})
        if (var[static_cast<int>(a)] < var[static_cast<int>(best)])
            best = a;
    return AxisFrame::modeling(best);
}

bool PlanarCell::contains(const Vec2& p) const
{
    for (int a = 0; a < 2; ++a) {
        if (p[a] < lo[a])
            return false;
        if (closed_hi[a] ? p[a] > hi[a] : p[a] >= hi[a])
            return false;
    }
    return true;
}

PlanarCell planar_core(const Block& block, const AxisFrame& frame)
{
    const BlockGrid grid(block.block_size, block.support_margin);
    PlanarCell cell;
    for (int i = 0; i < 2; ++i) {
        const auto idx = block.id[frame.source[i]];
        cell.lo[i] = grid.cell_min(idx);
        cell.hi[i] = grid.cell_max(idx);
        if (idx == grid.cells_per_axis() - 1) {
            cell.hi[i] = std::max(cell.hi[i], 1.0);
            cell.closed_hi[i] = true;
        }
    }
    return cell;
}

BasisSpec planar_basis(const Block& block, const AxisFrame& frame, int max_freq)
{
    const PlanarCell core = planar_core(block, frame);
    const double m = block.support_margin;
    BasisSpec b;
    b.m_min = core.lo[0] - m;
    b.m_max = core.hi[0] + m;
    b.n_min = core.lo[1] - m;
    b.n_max = core.hi[1] + m;
    b.max_freq = max_freq;
    return b;
}

WeightingSpec planar_weighting(const Block& block, const AxisFrame& frame, const FsuConfig& cfg)
{
    const PlanarCell core = planar_core(block, frame);
    WeightingSpec w;
    w.spatial_decay = cfg.spatial_decay;
    w.spectral_decay = cfg.spectral_decay;
    w.center = {0.5 * (core.lo[0] + core.hi[0]), 0.5 * (core.lo[1] + core.hi[1])};
    const double side = block.block_size + 2.0 * block.support_margin;
    w.unit_radius = 0.5 * std::sqrt(2.0) * side;
    return w;
}

std::vector<std::size_t> seeded_subsample(std::size_t n, std::size_t count, std::uint64_t seed)
{
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (count >= n)
        return idx;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::vector<Vec2> new_planar_positions(const Triangulation2D& tri, const PlanarCell& cell, std::size_t target_count,
                                       std::uint64_t seed)
{
    constexpr double tol = 1e-9;
    std::vector<Vec2> candidates;
    std::set<std::pair<long long, long long>> seen;
    for (const auto& [a, b] : tri.edges) {
        const Vec2& p = tri.vertices[a];
        const Vec2& q = tri.vertices[b];
        const Vec2 mid{0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])};
        if (!cell.contains(mid))
            continue;
        const auto key = std::pair{std::llround(mid[0] / tol), std::llround(mid[1] / tol)};
        if (seen.insert(key).second)
            candidates.push_back(mid);
    }
    if (candidates.size() <= target_count)
        return candidates;

    std::vector<Vec2> out;
    out.reserve(target_count);
    for (std::size_t i : seeded_subsample(candidates.size(), target_count, seed))
        out.push_back(candidates[i]);
    return out;
}

std::uint64_t block_seed(std::uint64_t seed, const BlockId& id)
{
    std::uint64_t s = seed;
    for (auto c : id)
        s = mix_seed(s, static_cast<std::uint64_t>(c));
    return s;
}

std::vector<std::size_t> allocate_targets(std::span<const Block> blocks, double scale_factor)
{
    std::vector<std::size_t> targets;
    targets.reserve(blocks.size());
    std::size_t cores = 0;
    long long assigned = 0;
    for (const auto& b : blocks) {
        cores += b.core_point_indices.size();
        const long long total = std::llround((scale_factor - 1.0) * static_cast<double>(cores));
        targets.push_back(static_cast<std::size_t>(std::max(0LL, total - assigned)));
        assigned = std::max(assigned, total);
    }
    return targets;
}

GeometryResult upsample_block_geometry(const Block& block, const PointCloud& cloud, const FsuConfig& cfg)
{
    const std::size_t target = static_cast<std::size_t>(
        std::llround((cfg.scale_factor - 1.0) * static_cast<double>(block.core_point_indices.size())));
    return upsample_block_geometry(block, cloud, cfg, target);
}

GeometryResult upsample_block_geometry(const Block& block, const PointCloud& cloud, const FsuConfig& cfg,
                                       std::size_t target)
{
    GeometryResult result;
    if (block.support_point_indices.size() < 3 || target == 0)
        return result;

    std::vector<Vec3> support;
    support.reserve(block.support_point_indices.size());
    for (std::size_t i : block.support_point_indices)
        support.push_back(cloud.positions[i]);

    result.frame = select_axis(support);
    const AxisFrame& frame = result.frame;

    ScatteredSamples samples;
    samples.positions.reserve(support.size());
    samples.values.reserve(support.size());
    for (const auto& p : support) {
        const Vec3 q = frame.to_frame(p);
        samples.positions.push_back({q[0], q[1]});
        samples.values.push_back(q[2]);
    }

    const BasisSpec basis = planar_basis(block, frame, cfg.max_freq);
    const WeightingSpec weights = planar_weighting(block, frame, cfg);
    result.model = estimate(samples, basis, weights, cfg.max_iterations, cfg.residual_threshold);

    Triangulation2D tri;
    try {
        tri = delaunay2d(samples.positions);
    } catch (const Error&) {
        return result;
    }
    if (tri.triangles.empty())
        return result;

    const auto planar = new_planar_positions(tri, planar_core(block, frame), SIZE_MAX, 0);
    if (planar.empty())
        return result;
    const auto heights = evaluate(result.model, basis, planar);

    // The fitted height may leave the core along the modeled axis; such
    // points belong to a neighbouring cell and are dropped here. A 1e-9
    // slack keeps flat surfaces lying on a cell face.
    const BlockGrid grid(block.block_size, block.support_margin);
    const auto cell = block.id[frame.source[2]];
    const double z_lo = grid.cell_min(cell) - kCoreSlack;
    const double z_hi =
        (cell == grid.cells_per_axis() - 1 ? std::max(grid.cell_max(cell), 1.0) : grid.cell_max(cell)) + kCoreSlack;
    std::vector<Vec3> inside;
    for (std::size_t i = 0; i < planar.size(); ++i) {
        if (!(heights[i] >= z_lo && heights[i] <= z_hi))
            continue;
        inside.push_back(frame.from_frame({planar[i][0], planar[i][1], heights[i]}));
    }

    const std::uint64_t seed = block_seed(cfg.seed, block.id);
    for (std::size_t i : seeded_subsample(inside.size(), target, seed))
        result.new_points.push_back(inside[i]);
    return result;
}

} // namespace fsu
