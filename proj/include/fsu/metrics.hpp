#pragma once

#include "fsu/core.hpp"

#include <array>
#include <limits>
#include <span>
#include <vector>

namespace fsu {

struct NormalField
{
    std::vector<Vec3> normals; ///< unit length, one per point
    std::size_t k = 0;
};

/// Per-point normal from the smallest principal direction of the covariance
/// of the point's k+1 nearest points (itself included). Signs are chosen so
/// that the dot product with +z is nonnegative, falling back to +y, then +x.
/// A zero-covariance neighborhood yields (0, 0, 1).
NormalField estimate_normals(const PointCloud& cloud, std::size_t k);

/// Mean distance from each test point to its nearest reference point.
double p2p_error(const PointCloud& test, const PointCloud& reference);

/// Mean |(p - r) . n_r| with r the nearest reference point of p.
double p2c_error(const PointCloud& test, const PointCloud& reference, const NormalField& reference_normals);

/// Mean of 1 - 2 theta / pi, theta the angle between the test normal and the
/// normal of the nearest reference point (unsigned, in [0, pi/2]).
double c2c_similarity(const PointCloud& test, const PointCloud& reference, std::size_t k);

/// Normal-based variant for callers that already hold both normal fields.
double c2c_similarity(const PointCloud& test, const NormalField& test_normals, const PointCloud& reference,
                      const NormalField& reference_normals);

struct ColorPsnr
{
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
    double avg = 0.0;
};

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

/// Per-channel 10 log10(255^2 / MSE). A zero-error channel reports
/// +infinity; `avg` is the mean over the finite channels and is +infinity only
/// when all three are.
ColorPsnr color_psnr(std::span<const Rgb> test, std::span<const Rgb> truth);

/// BT.601 luma rounded to [0, 255].
std::uint8_t luma(const Rgb& c);

/// Euclidean distance between the normalized 256-bin luma histograms.
double histogram_distance(std::span<const Rgb> test, std::span<const Rgb> reference);
double histogram_distance(const PointCloud& test, const PointCloud& reference);

struct MetricsReport
{
    double p2p = 0.0;
    double p2c = 0.0;
    double c2c = 1.0;
    bool has_color = false;
    ColorPsnr psnr;
    double hist_distance = 0.0;
};

/// Full report for a test cloud against a reference. Color PSNR pairs every
/// test point with its nearest reference point; color metrics are filled only
/// when both clouds carry colors.
MetricsReport compute_metrics(const PointCloud& test, const PointCloud& reference, std::size_t k);

} // namespace fsu
