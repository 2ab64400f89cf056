#include "fsu/delaunay.hpp"

#include <algorithm>
#include <set>

namespace fsu {

long double orient2d(const Vec2& a, const Vec2& b, const Vec2& c)
{
    const long double acx = static_cast<long double>(a[0]) - c[0];
    const long double bcx = static_cast<long double>(b[0]) - c[0];
    const long double acy = static_cast<long double>(a[1]) - c[1];
    const long double bcy = static_cast<long double>(b[1]) - c[1];
    return acx * bcy - acy * bcx;
}

long double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    const long double adx = static_cast<long double>(a[0]) - d[0];
    const long double ady = static_cast<long double>(a[1]) - d[1];
    const long double bdx = static_cast<long double>(b[0]) - d[0];
    const long double bdy = static_cast<long double>(b[1]) - d[1];
    const long double cdx = static_cast<long double>(c[0]) - d[0];
    const long double cdy = static_cast<long double>(c[1]) - d[1];
    const long double alift = adx * adx + ady * ady;
    const long double blift = bdx * bdx + bdy * bdy;
    const long double clift = cdx * cdx + cdy * cdy;
    return alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) + clift * (adx * bdy - ady * bdx);
}

namespace {

struct Tri
{
    std::array<int, 3> v;
    double cx = 0.0;
    double cy = 0.0;
    double r2 = 0.0;
};

Tri make_tri(const std::vector<Vec2>& pts, int a, int b, int c)
{
    if (orient2d(pts[a], pts[b], pts[c]) < 0)
        std::swap(b, c);
    Tri t{{a, b, c}};
    const double ax = pts[a][0], ay = pts[a][1];
    const double bx = pts[b][0] - ax, by = pts[b][1] - ay;
    const double cx = pts[c][0] - ax, cy = pts[c][1] - ay;
    const double d = 2.0 * (bx * cy - by * cx);
    if (d != 0.0) {
        const double b2 = bx * bx + by * by;
        const double c2 = cx * cx + cy * cy;
        const double ux = (cy * b2 - by * c2) / d;
        const double uy = (bx * c2 - cx * b2) / d;
        t.cx = ax + ux;
        t.cy = ay + uy;
        t.r2 = ux * ux + uy * uy;
    } else {
        t.r2 = -1.0; // degenerate: always fall through to the exact test
    }
    return t;
}

} // namespace

Triangulation2D delaunay2d(std::span<const Vec2> points)
{
    Triangulation2D out;
    {
        std::set<Vec2> seen;
        for (const auto& p : points)
            if (seen.insert(p).second)
                out.vertices.push_back(p);
    }
    const int n = static_cast<int>(out.vertices.size());
    if (n < 3)
        throw Error("untriangulatable block");

    // Work in a local frame mapped onto the unit square.
    Vec2 lo = out.vertices.front(), hi = lo;
    for (const auto& p : out.vertices) {
        lo = {std::min(lo[0], p[0]), std::min(lo[1], p[1])};
        hi = {std::max(hi[0], p[0]), std::max(hi[1], p[1])};
    }
    const double extent = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-300});
    std::vector<Vec2> pts;
    pts.reserve(n + 3);
    for (const auto& p : out.vertices)
        pts.push_back({(p[0] - lo[0]) / extent, (p[1] - lo[1]) / extent});

    constexpr double delta = 100.0;
    const int s0 = n, s1 = n + 1, s2 = n + 2;
    pts.push_back({0.5 - 2 * delta, 0.5 - delta});
    pts.push_back({0.5 + 2 * delta, 0.5 - delta});
    pts.push_back({0.5, 0.5 + 2 * delta});

    std::vector<Tri> tris{make_tri(pts, s0, s1, s2)};
    std::vector<std::pair<int, int>> cavity_edges;
    std::vector<std::pair<int, int>> boundary;
    std::vector<Tri> kept;

    for (int p = 0; p < n; ++p) {
        const Vec2& q = pts[p];
        cavity_edges.clear();
        kept.clear();
        for (const auto& t : tris) {
            bool bad;
            const double dx = q[0] - t.cx, dy = q[1] - t.cy;
            const double d2 = dx * dx + dy * dy;
            if (t.r2 >= 0.0 && d2 > t.r2 * (1.0 + 1e-9) + 1e-300)
                bad = false;
            else
                bad = incircle(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]], q) > 0;
            if (bad) {
                cavity_edges.emplace_back(t.v[0], t.v[1]);
                cavity_edges.emplace_back(t.v[1], t.v[2]);
                cavity_edges.emplace_back(t.v[2], t.v[0]);
            } else {
                kept.push_back(t);
            }
        }

        boundary.clear();
        for (const auto& e : cavity_edges) {
            const bool shared = std::any_of(cavity_edges.begin(), cavity_edges.end(), [&](const auto& o) {
                return o.first == e.second && o.second == e.first;
            });
            if (!shared)
                boundary.push_back(e);
        }
        tris.swap(kept);
        for (const auto& [a, b] : boundary)
            tris.push_back(make_tri(pts, a, b, p));
    }

    std::set<std::pair<int, int>> edges;
    for (const auto& t : tris) {
        if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n)
            continue;
        out.triangles.push_back(t.v);
        for (int i = 0; i < 3; ++i) {
            const int a = t.v[i], b = t.v[(i + 1) % 3];
            edges.insert({std::min(a, b), std::max(a, b)});
        }
    }
    std::sort(out.triangles.begin(), out.triangles.end());
    out.edges.assign(edges.begin(), edges.end());
    return out;
}

} // namespace fsu
