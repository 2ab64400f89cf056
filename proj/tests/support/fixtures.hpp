#pragma once

#include "fsu/core.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace fsu::fixture {

inline PointCloud random_cloud(std::size_t n, std::uint64_t seed, bool colors = false)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> c(0, 255);
    PointCloud cloud;
    if (colors)
        cloud.colors.emplace();
    for (std::size_t i = 0; i < n; ++i) {
        cloud.positions.push_back({u(rng), u(rng), u(rng)});
        if (colors)
            cloud.colors->push_back({std::uint8_t(c(rng)), std::uint8_t(c(rng)), std::uint8_t(c(rng))});
    }
    return cloud;
}

/// Points on a sphere of radius `radius` at the origin with uniform radial
/// jitter in [-noise, noise].
inline PointCloud noisy_sphere(std::size_t n, double radius, double noise, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(-noise, noise);
    PointCloud cloud;
    while (cloud.size() < n) {
        const double x = g(rng), y = g(rng), z = g(rng);
        const double len = std::sqrt(x * x + y * y + z * z);
        if (len < 1e-12)
            continue;
        const double r = radius + u(rng);
        cloud.positions.push_back({r * x / len, r * y / len, r * z / len});
    }
    return cloud;
}

/// Colors of the gradient plane as a function of (x, y) in [0,1]^2.
inline Rgb gradient_color(double x, double y)
{
    auto q = [](double v) { return static_cast<std::uint8_t>(std::lround(v)); };
    return {q(40.0 + 160.0 * x), q(30.0 + 180.0 * y), q(200.0 - 80.0 * x - 60.0 * y)};
}

/// Uniform random samples of the plane z = 0.2 x + 0.1 y over [0,1]^2, colored
/// with a linear gradient in every channel.
inline PointCloud gradient_plane(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointCloud cloud;
    cloud.colors.emplace();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = u(rng), y = u(rng);
        cloud.positions.push_back({x, y, 0.2 * x + 0.1 * y});
        cloud.colors->push_back(gradient_color(x, y));
    }
    return cloud;
}

} // namespace fsu::fixture
