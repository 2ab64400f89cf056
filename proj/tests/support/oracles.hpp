#pragma once

// Brute-force reference computations used only by tests. Nothing here calls
// into the code paths it is used to check.

#include "fsu/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace fsu::oracle {

inline double phi(int k, int l, double m, double n, const std::array<double, 4>& extent)
{
    const double u = (m - extent[0]) / (extent[1] - extent[0]);
    const double v = (n - extent[2]) / (extent[3] - extent[2]);
    return std::cos(k * std::numbers::pi * u) * std::cos(l * std::numbers::pi * v);
}

struct NaiveChoice
{
    int k = -1;
    int l = -1;
    double coefficient = 0.0;
    double score = 0.0;
};

/// Exhaustive argmax of dE * w_f from the definitions: residual energy with
/// spatial weights, weighted least-squares coefficient, spectral prior.
/// Scan order is plain (k, l); exact ties do not arise on random data.
inline NaiveChoice naive_select(const std::vector<Vec2>& pos, const std::vector<double>& residual,
                                const std::array<double, 4>& extent, int K, double rho, Vec2 center, double radius,
                                double sigma)
{
    std::vector<double> w(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const double d = std::sqrt((pos[i][0] - center[0]) * (pos[i][0] - center[0]) +
                                   (pos[i][1] - center[1]) * (pos[i][1] - center[1]));
        w[i] = std::pow(rho, d / radius);
    }
    auto energy = [&](const std::vector<double>& r) {
        double e = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i)
            e += w[i] * r[i] * r[i];
        return e;
    };
    const double e0 = energy(residual);

    NaiveChoice best;
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l) {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < pos.size(); ++i) {
                const double f = phi(k, l, pos[i][0], pos[i][1], extent);
                num += w[i] * residual[i] * f;
                den += w[i] * f * f;
            }
            if (den < 1e-12)
                continue;
            const double c = num / den;
            // energy decrease measured directly on the updated residual
            std::vector<double> r = residual;
            for (std::size_t i = 0; i < pos.size(); ++i)
                r[i] -= c * phi(k, l, pos[i][0], pos[i][1], extent);
            const double score = (e0 - energy(r)) * std::pow(sigma, std::sqrt(double(k * k + l * l)));
            if (best.k < 0 || score > best.score)
                best = {k, l, c, score};
        }
    return best;
}

inline double dist(const Vec3& a, const Vec3& b)
{
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

/// Nearest index by linear scan; ties go to the lowest index.
inline std::size_t nearest(const std::vector<Vec3>& ref, const Vec3& q)
{
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ref.size(); ++j) {
        const double dx = ref[j][0] - q[0], dy = ref[j][1] - q[1], dz = ref[j][2] - q[2];
        const double d = dx * dx + dy * dy + dz * dz;
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

inline double p2p(const std::vector<Vec3>& test, const std::vector<Vec3>& ref)
{
    double s = 0.0;
    for (const auto& p : test)
        s += dist(p, ref[nearest(ref, p)]);
    return s / static_cast<double>(test.size());
}

inline double p2c(const std::vector<Vec3>& test, const std::vector<Vec3>& ref, const std::vector<Vec3>& normals)
{
    double s = 0.0;
    for (const auto& p : test) {
        const std::size_t j = nearest(ref, p);
        const auto& r = ref[j];
        const auto& n = normals[j];
        s += std::abs((p[0] - r[0]) * n[0] + (p[1] - r[1]) * n[1] + (p[2] - r[2]) * n[2]);
    }
    return s / static_cast<double>(test.size());
}

/// Circumcircle containment in plain double with an explicit center; returns
/// true when d is inside by more than `tol` relative to the radius.
inline bool strictly_inside_circumcircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double tol)
{
    const double bx = b[0] - a[0], by = b[1] - a[1];
    const double cx = c[0] - a[0], cy = c[1] - a[1];
    const double den = 2.0 * (bx * cy - by * cx);
    if (den == 0.0)
        return false;
    const double ux = (cy * (bx * bx + by * by) - by * (cx * cx + cy * cy)) / den;
    const double uy = (bx * (cx * cx + cy * cy) - cx * (bx * bx + by * by)) / den;
    const double r = std::sqrt(ux * ux + uy * uy);
    const double dd = std::sqrt((d[0] - a[0] - ux) * (d[0] - a[0] - ux) + (d[1] - a[1] - uy) * (d[1] - a[1] - uy));
    return dd < r * (1.0 - tol);
}

inline double sample_variance(const std::vector<Vec3>& pts, int axis)
{
    double mean = 0.0;
    for (const auto& p : pts)
        mean += p[axis];
    mean /= pts.size();
    double ss = 0.0;
    for (const auto& p : pts)
        ss += (p[axis] - mean) * (p[axis] - mean);
    return ss / (pts.size() - 1);
}

} // namespace fsu::oracle
