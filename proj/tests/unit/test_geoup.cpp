#include "fsu/geoup.hpp"
#include "fsu/kdtree.hpp"
#include "fsu/pipeline.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace fsu;

TEST_CASE("axis frames are cyclic and invertible")
{
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
        const AxisFrame f = AxisFrame::modeling(a);
        const Vec3 p{0.1, 0.2, 0.3};
        CHECK(f.from_frame(f.to_frame(p)) == p);
        CHECK(f.to_frame(p)[2] == p[static_cast<int>(a)]);
    }
    CHECK(AxisFrame::modeling(Axis::X).to_frame({1, 2, 3}) == Vec3{2, 3, 1});
    CHECK(AxisFrame::modeling(Axis::Y).to_frame({1, 2, 3}) == Vec3{3, 1, 2});
}

TEST_CASE("select_axis picks the smallest variance")
{
    SUBCASE("flat in z")
    {
        const std::vector<Vec3> p{{0, 0, 0.1}, {2, 0, 0}, {0, 2, 0.1}, {2, 2, 0}};
        CHECK(select_axis(p).modeled_axis == Axis::Z);
    }
    SUBCASE("plane x = 0.3")
    {
        const std::vector<Vec3> p{{0.3, 0, 0}, {0.3, 1, 0.5}, {0.3, 0.2, 1}};
        const AxisFrame f = select_axis(p);
        CHECK(f.modeled_axis == Axis::X);
        CHECK(f.to_frame(p[1])[2] == 0.3);
    }
    SUBCASE("ties prefer z, then y")
    {
        const std::vector<Vec3> cube{{0, 0, 0}, {1, 1, 1}};
        CHECK(select_axis(cube).modeled_axis == Axis::Z);
        const std::vector<Vec3> xy{{0, 0, 0}, {1, 1, 2}};
        CHECK(select_axis(xy).modeled_axis == Axis::Y);
    }
    SUBCASE("anisotropic Gaussian samples")
    {
        std::mt19937_64 rng(4);
        for (int trial = 0; trial < 20; ++trial) {
            std::normal_distribution<double> g(0.0, 1.0);
            const std::array<double, 3> s{0.5 + trial % 3, 1.0 + (trial % 5) * 0.3, 0.7 + (trial % 7) * 0.2};
            std::vector<Vec3> p;
            for (int i = 0; i < 200; ++i)
                p.push_back({s[0] * g(rng), s[1] * g(rng), s[2] * g(rng)});
            int best = 2;
            for (int a : {1, 0})
                if (oracle::sample_variance(p, a) < oracle::sample_variance(p, best))
                    best = a;
            CHECK(static_cast<int>(select_axis(p).modeled_axis) == best);
        }
    }
    SUBCASE("too few points")
    {
        const std::vector<Vec3> one{{0, 0, 0}};
        CHECK_THROWS_WITH_AS(select_axis(one), "degenerate block", Error);
    }
}

TEST_CASE("midpoint candidates")
{
    PlanarCell cell{{0, 0}, {1, 1}, {false, false}};
    SUBCASE("single triangle inside the core")
    {
        const std::vector<Vec2> p{{0.1, 0.1}, {0.9, 0.1}, {0.5, 0.8}};
        const auto mids = new_planar_positions(delaunay2d(p), cell, 100, 0);
        CHECK(mids.size() == 3);
    }
    SUBCASE("midpoints outside the core are dropped")
    {
        const std::vector<Vec2> p{{0.1, 0.1}, {0.5, 0.1}, {0.3, 0.5}, {1.9, 0.2}};
        const auto tri = delaunay2d(p);
        const auto mids = new_planar_positions(tri, cell, 100, 0);
        for (const auto& m : mids)
            CHECK(cell.contains(m));
        // edge (0.5,0.1)-(1.9,0.2) has its midpoint at x = 1.2
        CHECK(std::none_of(mids.begin(), mids.end(), [](const Vec2& m) { return m[0] > 1.0; }));
        CHECK(mids.size() < tri.edges.size());
    }
    SUBCASE("shared edges contribute once")
    {
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<Vec2> p;
        for (int i = 0; i < 60; ++i)
            p.push_back({u(rng), u(rng)});
        const auto tri = delaunay2d(p);
        // naive per-triangle enumeration, then dedup
        std::vector<Vec2> naive;
        for (const auto& t : tri.triangles)
            for (int e = 0; e < 3; ++e) {
                const auto& a = tri.vertices[t[e]];
                const auto& b = tri.vertices[t[(e + 1) % 3]];
                const Vec2 m{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
                if (std::none_of(naive.begin(), naive.end(), [&](const Vec2& q) {
                        return std::abs(q[0] - m[0]) < 1e-9 && std::abs(q[1] - m[1]) < 1e-9;
                    }))
                    naive.push_back(m);
            }
        auto mids = new_planar_positions(tri, cell, 100000, 0);
        std::sort(mids.begin(), mids.end());
        std::sort(naive.begin(), naive.end());
        CHECK(mids == naive);
    }
    SUBCASE("subsampling is seeded and keeps candidate order")
    {
        std::vector<Vec2> p;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                p.push_back({0.05 + 0.18 * i + 0.001 * j, 0.05 + 0.18 * j});
        const auto tri = delaunay2d(p);
        const auto all = new_planar_positions(tri, cell, 100000, 0);
        const auto a = new_planar_positions(tri, cell, 10, 123);
        const auto b = new_planar_positions(tri, cell, 10, 123);
        const auto c = new_planar_positions(tri, cell, 10, 124);
        CHECK(a.size() == 10);
        CHECK(a == b);
        CHECK(a != c);
        auto pos = [&](const Vec2& q) { return std::find(all.begin(), all.end(), q) - all.begin(); };
        for (std::size_t i = 1; i < a.size(); ++i)
            CHECK(pos(a[i - 1]) < pos(a[i]));
    }
}

TEST_CASE("seeded subsample")
{
    const auto a = seeded_subsample(100, 30, 5);
    CHECK(a.size() == 30);
    CHECK(std::is_sorted(a.begin(), a.end()));
    CHECK(std::adjacent_find(a.begin(), a.end()) == a.end());
    CHECK(a == seeded_subsample(100, 30, 5));
    CHECK(seeded_subsample(5, 9, 1).size() == 5);
}

namespace {

PointCloud plane_cloud(std::size_t n, std::uint64_t seed, double height)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointCloud c;
    for (std::size_t i = 0; i < n; ++i)
        c.positions.push_back({u(rng), u(rng), height});
    return c;
}

} // namespace

TEST_CASE("constant plane blocks keep their height")
{
    const PointCloud c = plane_cloud(4000, 3, 0.3);
    FsuConfig cfg;
    cfg.block_size = 0.1;
    cfg.support_margin = 0.025;
    std::size_t produced = 0;
    for (const auto& b : partition(c, cfg.block_size, cfg.support_margin)) {
        const auto r = upsample_block_geometry(b, c, cfg);
        CHECK(r.frame.modeled_axis == Axis::Z);
        for (const auto& p : r.new_points)
            CHECK(std::abs(p[2] - 0.3) < 1e-9);
        produced += r.new_points.size();
    }
    CHECK(produced > 2 * c.size());
}

TEST_CASE("points are generated only inside the core")
{
    // support fills [0.755, 0.785]^2 around the core [0.76, 0.78]^2
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.755, 0.785);
    PointCloud c;
    for (int i = 0; i < 400; ++i) {
        const double x = u(rng), y = u(rng);
        c.positions.push_back({x, y, 0.5 + 0.3 * (x - 0.77) * (x - 0.77) + 0.1 * (y - 0.77)});
    }
    c.positions.push_back({0, 0, 0});
    c.positions.push_back({1, 1, 1});
    FsuConfig cfg;
    const auto blocks = partition(c, 0.02, 0.005);
    const auto it = std::find_if(blocks.begin(), blocks.end(),
                                 [](const Block& b) { return b.id[0] == 38 && b.id[1] == 38; });
    REQUIRE(it != blocks.end());
    CHECK(it->support_point_indices.size() > it->core_point_indices.size());
    const auto r = upsample_block_geometry(*it, c, cfg);
    CHECK(!r.new_points.empty());
    for (const auto& p : r.new_points) {
        CHECK(p[0] >= 0.76 - 1e-9);
        CHECK(p[0] <= 0.78 + 1e-9);
        CHECK(p[1] >= 0.76 - 1e-9);
        CHECK(p[1] <= 0.78 + 1e-9);
    }
    CHECK(r.new_points.size() <= static_cast<std::size_t>(std::llround(3.0 * it->core_point_indices.size())));
}

TEST_CASE("blocks too small to triangulate contribute nothing")
{
    PointCloud c;
    c.positions = {{0.1, 0.1, 0.1}, {0.12, 0.1, 0.1}, {0.9, 0.9, 0.9}};
    FsuConfig cfg;
    cfg.block_size = 0.5;
    for (const auto& b : partition(c, 0.5, 0.0))
        CHECK(upsample_block_geometry(b, c, cfg).new_points.empty());

    PointCloud line;
    for (int i = 0; i < 10; ++i)
        line.positions.push_back({i / 9.0, i / 9.0, 0.5});
    cfg.block_size = 1.0;
    for (const auto& b : partition(line, 1.0, 0.0))
        CHECK(upsample_block_geometry(b, line, cfg).new_points.empty());
}

TEST_CASE("end-to-end counts stay within bounds")
{
    const PointCloud c = fixture::random_cloud(3000, 14);
    for (double s : {1.5, 2.0, 4.0}) {
        FsuConfig cfg;
        cfg.block_size = 0.2;
        cfg.support_margin = 0.05;
        cfg.scale_factor = s;
        const auto r = upsample(c, cfg, 2);
        CHECK(r.output_points >= c.size());
        CHECK(r.output_points <= static_cast<std::size_t>(std::ceil(s * c.size())));
        // random volume points: blocks have plenty of surplus midpoints
        CHECK(r.output_points >= static_cast<std::size_t>(0.99 * std::ceil(s * c.size())));
    }
}

TEST_CASE("new points do not duplicate existing points")
{
    const PointCloud c = fixture::random_cloud(2000, 15);
    FsuConfig cfg;
    cfg.block_size = 0.25;
    cfg.support_margin = 0.05;
    const auto r = upsample(c, cfg, 2);
    const KdTree tree(r.cloud.positions);
    for (std::size_t i = c.size(); i < r.cloud.size(); ++i) {
        const auto nn = tree.knn(r.cloud.positions[i], 2);
        CHECK(nn[1].distance_sq > 1e-18);
    }
}

TEST_CASE("axis-permuted input gives the permuted output")
{
    // scale 10 exceeds the available midpoints, so no block subsamples and
    // block seeds play no role
    const PointCloud c = fixture::noisy_sphere(1500, 1.0, 0.01, 4);
    PointCloud p = c;
    for (auto& q : p.positions)
        q = {q[1], q[2], q[0]};
    FsuConfig cfg;
    cfg.block_size = 0.2;
    cfg.support_margin = 0.05;
    cfg.scale_factor = 10.0;
    const auto a = upsample(c, cfg, 2).cloud;
    const auto b = upsample(p, cfg, 2).cloud;
    std::vector<Vec3> pa;
    for (const auto& q : a.positions)
        pa.push_back({q[1], q[2], q[0]});
    std::vector<Vec3> pb = b.positions;
    std::sort(pa.begin(), pa.end());
    std::sort(pb.begin(), pb.end());
    CHECK(pa.size() == pb.size());
    CHECK(pa == pb);
}

TEST_CASE("sphere new points stay as close to the surface as the input")
{
    const double radius = 1.0;
    const PointCloud c = fixture::noisy_sphere(5000, radius, 0.01, 21);
    FsuConfig cfg;
    cfg.block_size = 0.1;
    cfg.support_margin = 0.025;
    cfg.scale_factor = 4.0;
    const auto r = upsample(c, cfg, 0);
    auto mean_err = [&](std::size_t from, std::size_t to) {
        double s = 0.0;
        for (std::size_t i = from; i < to; ++i)
            s += std::abs(oracle::dist(r.cloud.positions[i], {0, 0, 0}) - radius);
        return s / static_cast<double>(to - from);
    };
    const double input = mean_err(0, c.size());
    const double added = mean_err(c.size(), r.cloud.size());
    CHECK(r.cloud.size() > 3 * c.size());
    CHECK(added <= 2.0 * input);
}
