#include "fsu/pipeline.hpp"

#include "fsu/attrup.hpp"
#include "fsu/geoup.hpp"
#include "fsu/parallel.hpp"
#include "fsu/partition.hpp"

#include <chrono>
#include <cmath>

namespace fsu {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

double mean_finite(const std::vector<double>& xs)
{
    double sum = 0.0;
    int n = 0;
    for (double x : xs)
        if (std::isfinite(x)) {
            sum += x;
            ++n;
        }
    return n ? sum / n : kInfinitePsnr;
}

} // namespace

UpsampleResult upsample(const PointCloud& input, const FsuConfig& cfg, unsigned threads)
{
    cfg.validate();
    input.validate();
    const auto start = Clock::now();

    UpsampleResult result;
    result.input_points = input.size();
    result.colors_upsampled = input.has_colors();

    auto t = Clock::now();
    const auto [normalized, transform] = normalize(input);
    result.timings.normalize_ms = elapsed_ms(t);

    t = Clock::now();
    const auto blocks = partition(normalized, cfg.block_size, cfg.support_margin);
    result.blocks = blocks.size();
    result.timings.partition_ms = elapsed_ms(t);

    t = Clock::now();
    const auto targets = allocate_targets(blocks, cfg.scale_factor);
    std::vector<GeometryResult> geometry(blocks.size());
    parallel_for(blocks.size(), threads, [&](std::size_t b) {
        geometry[b] = upsample_block_geometry(blocks[b], normalized, cfg, targets[b]);
    });
    result.timings.geometry_ms = elapsed_ms(t);

    std::vector<BlockOutput> outputs(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        outputs[b].block = &blocks[b];
        outputs[b].new_points = std::move(geometry[b].new_points);
    }

    t = Clock::now();
    if (input.has_colors())
        parallel_for(blocks.size(), threads, [&](std::size_t b) {
            outputs[b].new_colors =
                upsample_block_attributes(blocks[b], normalized, geometry[b].frame, outputs[b].new_points, cfg);
        });
    result.timings.attribute_ms = elapsed_ms(t);

    t = Clock::now();
    const PointCloud merged = merge_block_outputs(normalized, std::move(outputs));
    // Originals are passed through untouched; only inserted points go back
    // through the inverse transform.
    result.cloud = input;
    result.cloud.positions.reserve(merged.size());
    for (std::size_t i = input.size(); i < merged.size(); ++i)
        result.cloud.positions.push_back(transform.invert(merged.positions[i]));
    if (input.has_colors())
        result.cloud.colors->insert(result.cloud.colors->end(),
                                    merged.colors->begin() + static_cast<std::ptrdiff_t>(input.size()),
                                    merged.colors->end());
    result.timings.merge_ms = elapsed_ms(t);

    result.output_points = result.cloud.size();
    result.timings.total_ms = elapsed_ms(start);
    return result;
}

AttributeProtocolResult run_attribute_protocol(const PointCloud& reference, const FsuConfig& cfg, int runs,
                                               unsigned threads)
{
    cfg.validate();
    if (!reference.has_colors())
        throw Error("attribute protocol needs a colored cloud");
    if (runs <= 0)
        throw Error("run count must be positive");
    if (!(cfg.scale_factor > 1.0))
        throw Error("attribute protocol needs a scale factor above 1");

    AttributeProtocolResult result;
    std::array<std::vector<double>, 4> psnrs;
    double hist_sum = 0.0;
    for (int r = 0; r < runs; ++r) {
        AttributeRun run;
        run.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(r));
        const AttributeSplit split = attribute_transfer_eval(reference, 1.0 / cfg.scale_factor, run.seed);
        const auto predicted = transfer_attributes(split.train, split.query_positions, cfg, threads);
        run.train_points = split.train.size();
        run.query_points = split.query_positions.size();
        run.psnr = color_psnr(predicted, split.query_truth_colors);
        run.hist_distance = histogram_distance(predicted, split.query_truth_colors);

        psnrs[0].push_back(run.psnr.r);
        psnrs[1].push_back(run.psnr.g);
        psnrs[2].push_back(run.psnr.b);
        psnrs[3].push_back(run.psnr.avg);
        hist_sum += run.hist_distance;
        result.runs.push_back(run);
    }
    result.mean_psnr = {mean_finite(psnrs[0]), mean_finite(psnrs[1]), mean_finite(psnrs[2]), mean_finite(psnrs[3])};
    result.mean_hist_distance = hist_sum / runs;
    return result;
}

PointCloud random_downsample(const PointCloud& cloud, double keep_fraction, std::uint64_t seed)
{
    const auto keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(keep_fraction * static_cast<double>(cloud.size()))));
    PointCloud out;
    if (cloud.has_colors())
        out.colors.emplace();
    for (std::size_t i : seeded_subsample(cloud.size(), keep, seed)) {
        out.positions.push_back(cloud.positions[i]);
        if (cloud.has_colors())
            out.colors->push_back((*cloud.colors)[i]);
    }
    return out;
}

std::vector<SweepRow> run_sweep(const PointCloud& input, const std::vector<double>& block_sizes,
                                const std::vector<double>& margin_ratios, const FsuConfig& cfg, std::size_t knn,
                                unsigned threads)
{
    cfg.validate();
    std::vector<SweepRow> rows;
    const PointCloud low = random_downsample(input, 1.0 / cfg.scale_factor, mix_seed(cfg.seed, 0x5eed));
    for (double n : block_sizes)
        for (double ratio : margin_ratios) {
            FsuConfig c = cfg;
            c.block_size = n;
            c.support_margin = ratio * n;

            SweepRow row;
            row.block_size = n;
            row.margin_ratio = ratio;
            PointCloud geometry_only = low;
            geometry_only.colors.reset();
            const UpsampleResult up = upsample(geometry_only, c, threads);
            row.output_points = up.output_points;
            row.c2c = c2c_similarity(up.cloud, input, knn);
            row.hist_distance = input.has_colors() && cfg.scale_factor > 1.0
                                    ? run_attribute_protocol(input, c, 1, threads).mean_hist_distance
                                    : std::nan("");
            rows.push_back(row);
        }
    return rows;
}

} // namespace fsu
