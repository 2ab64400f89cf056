#pragma once

#include "fsu/core.hpp"

#include <array>
#include <span>
#include <utility>
#include <vector>

namespace fsu {

struct Triangulation2D
{
    std::vector<Vec2> vertices;                  ///< deduplicated input, first occurrence kept
    std::vector<std::array<int, 3>> triangles;   ///< counter-clockwise vertex indices
    std::vector<std::pair<int, int>> edges;      ///< unique, (lo, hi), sorted
};

/// Bowyer-Watson Delaunay triangulation. Exact duplicates are dropped before
/// insertion. Fully collinear input yields a triangulation without triangles.
/// Throws Error("untriangulatable block") with fewer than 3 distinct points.
Triangulation2D delaunay2d(std::span<const Vec2> points);

/// > 0 when d lies strictly inside the circumcircle of the counter-clockwise
/// triangle (a, b, c); evaluated in long double.
long double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

/// > 0 when (a, b, c) turns counter-clockwise.
long double orient2d(const Vec2& a, const Vec2& b, const Vec2& c);

} // namespace fsu
