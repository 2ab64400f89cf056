#pragma once

#include "fsu/core.hpp"
#include "fsu/metrics.hpp"

#include <vector>

namespace fsu {

struct StageTimings
{
    double normalize_ms = 0.0;
    double partition_ms = 0.0;
    double geometry_ms = 0.0;
    double attribute_ms = 0.0;
    double merge_ms = 0.0;
    double total_ms = 0.0;
};

struct UpsampleResult
{
    PointCloud cloud;
    std::size_t input_points = 0;
    std::size_t output_points = 0;
    std::size_t blocks = 0;
    bool colors_upsampled = false;
    StageTimings timings;
};

/// Joint upsampling: normalize, partition, geometry per block, attributes per
/// block (when the input has colors), merge. The input points come first and
/// unchanged; new points follow in block order. Output is independent of
/// `threads` (0 = hardware concurrency).
UpsampleResult upsample(const PointCloud& input, const FsuConfig& cfg, unsigned threads = 0);

struct AttributeRun
{
    std::uint64_t seed = 0;
    std::size_t train_points = 0;
    std::size_t query_points = 0;
    ColorPsnr psnr;
    double hist_distance = 0.0;
};

struct AttributeProtocolResult
{
    std::vector<AttributeRun> runs;
    ColorPsnr mean_psnr;
    double mean_hist_distance = 0.0;
};

/// Color-only evaluation: keep 1/scale_factor of the points (seeded per run)
/// with color, predict colors of the rest from geometry alone, and score PSNR
/// and luma histogram distance on the predicted points. Averages over `runs`.
AttributeProtocolResult run_attribute_protocol(const PointCloud& reference, const FsuConfig& cfg, int runs,
                                               unsigned threads = 0);

struct SweepRow
{
    double block_size = 0.0;
    double margin_ratio = 0.0; ///< M / N
    double c2c = 0.0;
    double hist_distance = 0.0; ///< NaN for colorless input
    std::size_t output_points = 0;
};

/// Cross product of block sizes and margin ratios. Geometry: the input is
/// downsampled by 1/scale_factor, upsampled back and compared to the input
/// with C2C. Color: one attribute-protocol run, histogram distance.
std::vector<SweepRow> run_sweep(const PointCloud& input, const std::vector<double>& block_sizes,
                                const std::vector<double>& margin_ratios, const FsuConfig& cfg, std::size_t knn,
                                unsigned threads = 0);

/// Seeded uniform subset of round(keep_fraction * n) points (at least 1).
PointCloud random_downsample(const PointCloud& cloud, double keep_fraction, std::uint64_t seed);

} // namespace fsu
