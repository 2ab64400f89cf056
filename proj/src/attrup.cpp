#include "fsu/attrup.hpp"

#include "fsu/fsmodel.hpp"
#include "fsu/kdtree.hpp"
#include "fsu/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace fsu {

namespace {

std::uint8_t to_channel(double v)
{
    if (!std::isfinite(v))
        return 0;
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

ProjectedBlock make_projected(std::span<const Vec3> support, std::span<const Rgb> colors, const AxisFrame& frame,
                              std::span<const Vec3> queries)
{
    ProjectedBlock pb;
    pb.sample_positions = project(support, frame);
    for (int c = 0; c < 3; ++c) {
        pb.sample_colors[c].reserve(colors.size());
        for (const auto& rgb : colors)
            pb.sample_colors[c].push_back(rgb[c]);
    }
    pb.query_positions = project(queries, frame);
    return pb;
}

std::vector<Rgb> fit_and_evaluate(const ProjectedBlock& pb, const Block& block, const AxisFrame& frame,
                                  const FsuConfig& cfg)
{
    const BasisSpec basis = planar_basis(block, frame, cfg.max_freq);
    const WeightingSpec weights = planar_weighting(block, frame, cfg);

    std::vector<Rgb> out(pb.query_positions.size());
    for (int c = 0; c < 3; ++c) {
        const ScatteredSamples samples{pb.sample_positions, pb.sample_colors[c]};
        const SparseModel model = estimate(samples, basis, weights, cfg.max_iterations, cfg.residual_threshold);
        const auto values = evaluate(model, basis, pb.query_positions);
        for (std::size_t i = 0; i < values.size(); ++i)
            out[i][c] = to_channel(values[i]);
    }
    return out;
}

AxisFrame frame_for(std::span<const Vec3> support)
{
    return support.size() >= 2 ? select_axis(support) : AxisFrame::modeling(Axis::Z);
}

} // namespace

std::vector<Vec2> project(std::span<const Vec3> frame_points)
{
    std::vector<Vec2> out;
    out.reserve(frame_points.size());
    for (const auto& p : frame_points)
        out.push_back({p[0], p[1]});
    return out;
}

std::vector<Vec2> project(std::span<const Vec3> world_points, const AxisFrame& frame)
{
    std::vector<Vec2> out;
    out.reserve(world_points.size());
    for (const auto& p : world_points) {
        const Vec3 q = frame.to_frame(p);
        out.push_back({q[0], q[1]});
    }
    return out;
}

std::vector<Rgb> upsample_block_attributes(const Block& block, const PointCloud& cloud, const AxisFrame& frame,
                                           std::span<const Vec3> new_points, const FsuConfig& cfg)
{
    if (!cloud.has_colors())
        throw Error("attribute upsampling needs a colored cloud");
    if (new_points.empty())
        return {};
    if (block.support_point_indices.empty())
        throw Error("block without support points");

    std::vector<Vec3> support;
    std::vector<Rgb> colors;
    for (std::size_t i : block.support_point_indices) {
        support.push_back(cloud.positions[i]);
        colors.push_back((*cloud.colors)[i]);
    }
    return fit_and_evaluate(make_projected(support, colors, frame, new_points), block, frame, cfg);
}

AttributeSplit attribute_transfer_eval(const PointCloud& reference, double keep_fraction, std::uint64_t seed)
{
    if (!reference.has_colors())
        throw Error("attribute protocol needs a colored cloud");
    if (!(keep_fraction > 0.0 && keep_fraction < 1.0))
        throw Error("keep fraction must lie in (0,1)");

    const std::size_t n = reference.size();
    const auto keep = static_cast<std::size_t>(std::llround(keep_fraction * static_cast<double>(n)));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    AttributeSplit split;
    split.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
    split.query_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(keep), order.end());
    std::sort(split.train_indices.begin(), split.train_indices.end());
    std::sort(split.query_indices.begin(), split.query_indices.end());

    split.train.colors.emplace();
    for (std::size_t i : split.train_indices) {
        split.train.positions.push_back(reference.positions[i]);
        split.train.colors->push_back((*reference.colors)[i]);
    }
    for (std::size_t i : split.query_indices) {
        split.query_positions.push_back(reference.positions[i]);
        split.query_truth_colors.push_back((*reference.colors)[i]);
    }
    return split;
}

std::vector<Rgb> transfer_attributes(const PointCloud& train, std::span<const Vec3> query_positions,
                                     const FsuConfig& cfg, unsigned threads)
{
    cfg.validate();
    if (!train.has_colors() || train.empty())
        throw Error("attribute transfer needs a nonempty colored training cloud");
    if (query_positions.empty())
        return {};

    const std::size_t n_train = train.size();
    PointCloud combined;
    combined.positions = train.positions;
    combined.positions.insert(combined.positions.end(), query_positions.begin(), query_positions.end());
    const PointCloud normalized = normalize(combined).first;
    const auto blocks = partition(normalized, cfg.block_size, cfg.support_margin);

    std::vector<Vec3> train_normalized(normalized.positions.begin(),
                                       normalized.positions.begin() + static_cast<std::ptrdiff_t>(n_train));
    const KdTree train_tree(train_normalized);

    std::vector<Rgb> result(query_positions.size());
    parallel_for(blocks.size(), threads, [&](std::size_t b) {
        const Block& block = blocks[b];
        std::vector<std::size_t> queries;
        for (std::size_t i : block.core_point_indices)
            if (i >= n_train)
                queries.push_back(i);
        if (queries.empty())
            return;

        std::vector<Vec3> support;
        std::vector<Rgb> colors;
        for (std::size_t i : block.support_point_indices)
            if (i < n_train) {
                support.push_back(normalized.positions[i]);
                colors.push_back((*train.colors)[i]);
            }

        std::vector<Vec3> query_points;
        for (std::size_t i : queries)
            query_points.push_back(normalized.positions[i]);

        if (support.empty()) {
            for (std::size_t q = 0; q < queries.size(); ++q)
                result[queries[q] - n_train] = (*train.colors)[train_tree.nearest(query_points[q]).index];
            return;
        }

        const AxisFrame frame = frame_for(support);
        const auto rgb = fit_and_evaluate(make_projected(support, colors, frame, query_points), block, frame, cfg);
        for (std::size_t q = 0; q < queries.size(); ++q)
            result[queries[q] - n_train] = rgb[q];
    });
    return result;
}

} // namespace fsu
