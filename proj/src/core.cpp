#include "fsu/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fsu {

void PointCloud::validate() const
{
    if (colors && colors->size() != positions.size())
        throw Error("color count " + std::to_string(colors->size()) + " does not match position count " +
                    std::to_string(positions.size()));
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (double c : positions[i])
            if (!std::isfinite(c))
                throw Error("non-finite coordinate at point " + std::to_string(i));
}

Vec3 NormalizationTransform::apply(const Vec3& p) const
{
    return {(p[0] - offset[0]) / scale, (p[1] - offset[1]) / scale, (p[2] - offset[2]) / scale};
}

Vec3 NormalizationTransform::invert(const Vec3& q) const
{
    return {q[0] * scale + offset[0], q[1] * scale + offset[1], q[2] * scale + offset[2]};
}

void FsuConfig::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw Error(std::string("invalid configuration: ") + what);
    };
    require(std::isfinite(block_size) && block_size > 0.0, "block size must be positive");
    require(std::isfinite(support_margin) && support_margin >= 0.0, "support margin must be nonnegative");
    require(spectral_decay > 0.0 && spectral_decay < 1.0, "spectral decay must lie in (0,1)");
    require(spatial_decay > 0.0 && spatial_decay <= 1.0, "spatial decay must lie in (0,1]");
    require(max_freq > 0, "max frequency must be positive");
    require(max_iterations > 0, "iteration budget must be positive");
    require(residual_threshold >= 0.0, "residual threshold must be nonnegative");
    require(std::isfinite(scale_factor) && scale_factor >= 1.0, "scale factor must be >= 1");
}

std::pair<PointCloud, NormalizationTransform> normalize(const PointCloud& cloud)
{
    if (cloud.empty())
        throw Error("empty input");

    Vec3 lo = cloud.positions.front();
    Vec3 hi = lo;
    for (const auto& p : cloud.positions)
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }

    NormalizationTransform t;
    t.offset = lo;
    const double extent = std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
    t.scale = extent > 0.0 ? extent : 1.0;

    PointCloud out;
    out.positions.reserve(cloud.size());
    for (const auto& p : cloud.positions) {
        Vec3 q = t.apply(p);
        // rounding can push the extreme coordinate a hair past 1
        for (double& c : q)
            c = std::clamp(c, 0.0, 1.0);
        out.positions.push_back(q);
    }
    out.colors = cloud.colors;
    return {std::move(out), t};
}

PointCloud denormalize(const PointCloud& cloud, const NormalizationTransform& t)
{
    PointCloud out;
    out.positions.reserve(cloud.size());
    for (const auto& q : cloud.positions)
        out.positions.push_back(t.invert(q));
    out.colors = cloud.colors;
    return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt)
{
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace fsu
