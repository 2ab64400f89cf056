#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsu {

using Vec3 = std::array<double, 3>;
using Vec2 = std::array<double, 2>;
using Rgb = std::array<std::uint8_t, 3>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Positions with an optional per-point RGB attribute.
///
/// When `colors` is engaged it holds exactly one entry per position. All
/// coordinates are expected to be finite; `validate()` checks both.
struct PointCloud
{
    std::vector<Vec3> positions;
    std::optional<std::vector<Rgb>> colors;

    std::size_t size() const { return positions.size(); }
    bool empty() const { return positions.empty(); }
    bool has_colors() const { return colors.has_value(); }

    void validate() const;

    friend bool operator==(const PointCloud&, const PointCloud&) = default;
};

/// Uniform affine map taking the cloud's bounding box into the unit cube:
/// normalized = (p - offset) / scale.
struct NormalizationTransform
{
    Vec3 offset{0.0, 0.0, 0.0};
    double scale = 1.0;

    Vec3 apply(const Vec3& p) const;
    Vec3 invert(const Vec3& q) const;
};

struct FsuConfig
{
    double block_size = 0.02;      // N, normalized units
    double support_margin = 0.005; // M, normalized units
    double spectral_decay = 0.8;   // sigma
    double spatial_decay = 0.7;    // rho
    int max_freq = 8;              // K, candidates {0..K-1}^2
    int max_iterations = 32;
    double residual_threshold = 0.0;
    double scale_factor = 4.0;
    std::uint64_t seed = 0;

    /// Throws Error on any out-of-range field.
    void validate() const;
};

/// Returns the normalized cloud together with the transform that produced it.
/// Colors are copied through. The longest bounding-box extent maps to 1.
std::pair<PointCloud, NormalizationTransform> normalize(const PointCloud& cloud);

PointCloud denormalize(const PointCloud& cloud, const NormalizationTransform& t);

/// Deterministic 64-bit mixer used to derive per-block and per-run seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

} // namespace fsu
