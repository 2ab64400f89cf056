#include "fsu/attrup.hpp"
#include "fsu/delaunay.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fsu;

namespace {

PointCloud colored_plane(std::size_t n, std::uint64_t seed, Rgb (*color)(double, double))
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointCloud c;
    c.colors.emplace();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = u(rng), y = u(rng);
        c.positions.push_back({x, y, 0.4 + 0.05 * x});
        c.colors->push_back(color(x, y));
    }
    return c;
}

Rgb horizontal(double x, double)
{
    return {static_cast<std::uint8_t>(std::lround(20.0 + 200.0 * x)), 90,
            static_cast<std::uint8_t>(std::lround(230.0 - 150.0 * x))};
}

Rgb red(double, double)
{
    return {255, 0, 0};
}

} // namespace

TEST_CASE("projection drops the modeled coordinate")
{
    const std::vector<Vec3> p{{1, 2, 3}};
    CHECK(project(p, AxisFrame::modeling(Axis::Z))[0] == Vec2{1, 2});
    CHECK(project(p, AxisFrame::modeling(Axis::X))[0] == Vec2{2, 3});
    CHECK(project(p, AxisFrame::modeling(Axis::Y))[0] == Vec2{3, 1});
    const std::vector<Vec3> framed{{4, 5, 6}};
    CHECK(project(framed)[0] == Vec2{4, 5});
}

TEST_CASE("uniform color block predicts the same color")
{
    const PointCloud c = colored_plane(300, 1, red);
    const auto blocks = partition(c, 1.0, 0.0);
    REQUIRE(blocks.size() == 1);
    const std::vector<Vec3> q{{0.5, 0.5, 0.425}, {0.01, 0.99, 0.4}, {0.77, 0.1, 0.44}};
    for (const auto& rgb : upsample_block_attributes(blocks[0], c, AxisFrame::modeling(Axis::Z), q, FsuConfig{}))
        CHECK(rgb == Rgb{255, 0, 0});
}

TEST_CASE("a single support point colors everything")
{
    PointCloud c;
    c.positions = {{0.3, 0.3, 0.3}};
    c.colors = std::vector<Rgb>{{12, 34, 56}};
    const auto blocks = partition(c, 1.0, 0.0);
    const std::vector<Vec3> q{{0.1, 0.9, 0.3}, {0.3, 0.3, 0.3}};
    for (const auto& rgb : upsample_block_attributes(blocks[0], c, AxisFrame::modeling(Axis::Z), q, FsuConfig{}))
        CHECK(rgb == Rgb{12, 34, 56});
}

TEST_CASE("linear gradient is reproduced at edge midpoints")
{
    const PointCloud c = colored_plane(200, 2, horizontal);
    const auto blocks = partition(c, 1.0, 0.0);
    REQUIRE(blocks.size() == 1);
    std::vector<Vec2> planar;
    for (const auto& p : c.positions)
        planar.push_back({p[0], p[1]});
    const auto tri = delaunay2d(planar);
    std::vector<Vec3> q;
    for (std::size_t e = 0; e < tri.edges.size() && q.size() < 100; e += 3) {
        const auto& a = tri.vertices[tri.edges[e].first];
        const auto& b = tri.vertices[tri.edges[e].second];
        const double x = 0.5 * (a[0] + b[0]), y = 0.5 * (a[1] + b[1]);
        q.push_back({x, y, 0.4 + 0.05 * x});
    }
    REQUIRE(q.size() == 100);
    const auto rgb = upsample_block_attributes(blocks[0], c, AxisFrame::modeling(Axis::Z), q, FsuConfig{});
    std::array<double, 3> se{};
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double truth[3] = {20.0 + 200.0 * q[i][0], 90.0, 230.0 - 150.0 * q[i][0]};
        for (int ch = 0; ch < 3; ++ch)
            se[ch] += (rgb[i][ch] - truth[ch]) * (rgb[i][ch] - truth[ch]);
    }
    for (int ch = 0; ch < 3; ++ch)
        CHECK(std::sqrt(se[ch] / q.size()) <= 2.0);
}

TEST_CASE("colors are rounded and clamped")
{
    PointCloud c;
    c.colors.emplace();
    for (int i = 0; i < 40; ++i) {
        const double x = i / 39.0;
        c.positions.push_back({x, 0.5 + 0.01 * (i % 3), 0.5});
        c.colors->push_back({static_cast<std::uint8_t>(i < 20 ? 0 : 255), 128, 128});
    }
    const auto blocks = partition(c, 1.0, 0.0);
    std::vector<Vec3> q;
    for (int i = 0; i <= 50; ++i)
        q.push_back({i / 50.0, 0.51, 0.5});
    // ringing of a step edge would overshoot [0, 255] without clamping
    const auto rgb = upsample_block_attributes(blocks[0], c, AxisFrame::modeling(Axis::Z), q, FsuConfig{});
    CHECK(rgb.size() == q.size());
}

TEST_CASE("colorless cloud is rejected")
{
    const PointCloud c = fixture::random_cloud(10, 1);
    const auto blocks = partition(c, 1.0, 0.0);
    const std::vector<Vec3> q{{0.5, 0.5, 0.5}};
    CHECK_THROWS_AS(upsample_block_attributes(blocks[0], c, AxisFrame{}, q, FsuConfig{}), Error);
}

TEST_CASE("split is seeded, disjoint and complete")
{
    const PointCloud c = fixture::random_cloud(1000, 3, true);
    const auto a = attribute_transfer_eval(c, 0.25, 7);
    const auto b = attribute_transfer_eval(c, 0.25, 7);
    const auto d = attribute_transfer_eval(c, 0.25, 8);
    CHECK(a.train_indices == b.train_indices);
    CHECK(a.train_indices != d.train_indices);
    CHECK(a.train.size() == 250);
    CHECK(a.query_positions.size() == 750);
    std::vector<int> seen(c.size(), 0);
    for (auto i : a.train_indices)
        ++seen[i];
    for (auto i : a.query_indices)
        ++seen[i];
    CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
    for (std::size_t j = 0; j < a.query_indices.size(); ++j)
        CHECK(a.query_truth_colors[j] == (*c.colors)[a.query_indices[j]]);

    const auto most = attribute_transfer_eval(c, 0.999, 1);
    CHECK(most.query_positions.size() == 1);
    CHECK_THROWS_AS(attribute_transfer_eval(c, 1.0, 1), Error);
    CHECK_THROWS_AS(attribute_transfer_eval(fixture::random_cloud(5, 1), 0.5, 1), Error);
}

TEST_CASE("constant colors transfer exactly for any split")
{
    PointCloud c = fixture::random_cloud(3000, 5, true);
    for (auto& rgb : *c.colors)
        rgb = {17, 200, 99};
    FsuConfig cfg;
    cfg.block_size = 0.1;
    cfg.support_margin = 0.025;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto split = attribute_transfer_eval(c, 0.25, seed);
        for (const auto& rgb : transfer_attributes(split.train, split.query_positions, cfg, 2))
            CHECK(rgb == Rgb{17, 200, 99});
    }
}

TEST_CASE("swapping red and blue swaps the predictions")
{
    const PointCloud c = fixture::gradient_plane(4000, 9);
    PointCloud swapped = c;
    for (auto& rgb : *swapped.colors)
        std::swap(rgb[0], rgb[2]);
    FsuConfig cfg;
    cfg.block_size = 0.1;
    cfg.support_margin = 0.025;
    const auto split = attribute_transfer_eval(c, 0.25, 4);
    const auto split_s = attribute_transfer_eval(swapped, 0.25, 4);
    const auto a = transfer_attributes(split.train, split.query_positions, cfg, 2);
    const auto b = transfer_attributes(split_s.train, split_s.query_positions, cfg, 2);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(b[i] == Rgb{a[i][2], a[i][1], a[i][0]});
}

TEST_CASE("transfer is independent of the thread count")
{
    const PointCloud c = fixture::gradient_plane(3000, 10);
    FsuConfig cfg;
    cfg.block_size = 0.1;
    cfg.support_margin = 0.025;
    const auto split = attribute_transfer_eval(c, 0.25, 1);
    CHECK(transfer_attributes(split.train, split.query_positions, cfg, 1) ==
          transfer_attributes(split.train, split.query_positions, cfg, 4));
}
