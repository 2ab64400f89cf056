#include "fsu/metrics.hpp"

#include "fsu/kdtree.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fsu {

namespace {

constexpr double kDegenerateTrace = 1e-30;

Vec3 orient_normal(Vec3 n)
{
    double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    for (double& c : n)
        c /= norm;
    const int key = n[2] != 0.0 ? 2 : (n[1] != 0.0 ? 1 : 0);
    if (n[key] < 0.0)
        for (double& c : n)
            c = -c;
    return n;
}

void require_nonempty(const PointCloud& c, const char* which)
{
    if (c.empty())
        throw Error(std::string(which) + " cloud is empty");
}

} // namespace

NormalField estimate_normals(const PointCloud& cloud, std::size_t k)
{
    if (k == 0 || cloud.size() < k + 1)
        throw Error("normal estimation needs at least k+1 points");

    const KdTree tree(cloud.positions);
    NormalField field;
    field.k = k;
    field.normals.resize(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto nbrs = tree.knn(cloud.positions[i], k + 1);
        Eigen::Vector3d mean = Eigen::Vector3d::Zero();
        for (const auto& nb : nbrs)
            mean += Eigen::Vector3d(cloud.positions[nb.index].data());
        mean /= static_cast<double>(nbrs.size());
        Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
        for (const auto& nb : nbrs) {
            const Eigen::Vector3d d = Eigen::Vector3d(cloud.positions[nb.index].data()) - mean;
            cov += d * d.transpose();
        }
        if (cov.trace() <= kDegenerateTrace) {
            field.normals[i] = {0.0, 0.0, 1.0};
            continue;
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
        const Eigen::Vector3d v = eig.eigenvectors().col(0);
        field.normals[i] = orient_normal({v[0], v[1], v[2]});
    }
    return field;
}

double p2p_error(const PointCloud& test, const PointCloud& reference)
{
    require_nonempty(test, "test");
    require_nonempty(reference, "reference");
    const KdTree tree(reference.positions);
    double sum = 0.0;
    for (const auto& p : test.positions)
        sum += std::sqrt(tree.nearest(p).distance_sq);
    return sum / static_cast<double>(test.size());
}

double p2c_error(const PointCloud& test, const PointCloud& reference, const NormalField& reference_normals)
{
    require_nonempty(test, "test");
    require_nonempty(reference, "reference");
    if (reference_normals.normals.size() != reference.size())
        throw Error("normal field does not match the reference cloud");
    const KdTree tree(reference.positions);
    double sum = 0.0;
    for (const auto& p : test.positions) {
        const std::size_t j = tree.nearest(p).index;
        const auto& r = reference.positions[j];
        const auto& n = reference_normals.normals[j];
        sum += std::abs((p[0] - r[0]) * n[0] + (p[1] - r[1]) * n[1] + (p[2] - r[2]) * n[2]);
    }
    return sum / static_cast<double>(test.size());
}

double c2c_similarity(const PointCloud& test, const NormalField& test_normals, const PointCloud& reference,
                      const NormalField& reference_normals)
{
    require_nonempty(test, "test");
    require_nonempty(reference, "reference");
    const KdTree tree(reference.positions);
    double sum = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const std::size_t j = tree.nearest(test.positions[i]).index;
        const auto& a = test_normals.normals[i];
        const auto& b = reference_normals.normals[j];
        // atan2 keeps identical normals at exactly zero angle
        const double dot = std::abs(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
        const double cx = a[1] * b[2] - a[2] * b[1];
        const double cy = a[2] * b[0] - a[0] * b[2];
        const double cz = a[0] * b[1] - a[1] * b[0];
        const double theta = std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
        sum += 1.0 - 2.0 * theta / std::numbers::pi;
    }
    return sum / static_cast<double>(test.size());
}

double c2c_similarity(const PointCloud& test, const PointCloud& reference, std::size_t k)
{
    return c2c_similarity(test, estimate_normals(test, k), reference, estimate_normals(reference, k));
}

ColorPsnr color_psnr(std::span<const Rgb> test, std::span<const Rgb> truth)
{
    if (test.size() != truth.size())
        throw Error("color PSNR needs equally many test and truth colors");
    if (test.empty())
        throw Error("color PSNR of an empty set");

    std::array<double, 3> sse{};
    for (std::size_t i = 0; i < test.size(); ++i)
        for (int c = 0; c < 3; ++c) {
            const double d = static_cast<double>(test[i][c]) - static_cast<double>(truth[i][c]);
            sse[c] += d * d;
        }

    std::array<double, 3> psnr{};
    double finite_sum = 0.0;
    int finite = 0;
    for (int c = 0; c < 3; ++c) {
        const double mse = sse[c] / static_cast<double>(test.size());
        psnr[c] = mse == 0.0 ? kInfinitePsnr : 10.0 * std::log10(255.0 * 255.0 / mse);
        if (std::isfinite(psnr[c])) {
            finite_sum += psnr[c];
            ++finite;
        }
    }
    return {psnr[0], psnr[1], psnr[2], finite ? finite_sum / finite : kInfinitePsnr};
}

std::uint8_t luma(const Rgb& c)
{
    const double y = 0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2];
    return static_cast<std::uint8_t>(std::clamp(std::lround(y), 0L, 255L));
}

double histogram_distance(std::span<const Rgb> test, std::span<const Rgb> reference)
{
    if (test.empty() || reference.empty())
        throw Error("histogram distance of an empty color set");
    std::array<double, 256> ht{}, hr{};
    for (const auto& c : test)
        ht[luma(c)] += 1.0;
    for (const auto& c : reference)
        hr[luma(c)] += 1.0;
    double sum = 0.0;
    for (int b = 0; b < 256; ++b) {
        const double d = ht[b] / static_cast<double>(test.size()) - hr[b] / static_cast<double>(reference.size());
        sum += d * d;
    }
    return std::sqrt(sum);
}

double histogram_distance(const PointCloud& test, const PointCloud& reference)
{
    if (!test.has_colors() || !reference.has_colors())
        throw Error("histogram distance needs colored clouds");
    return histogram_distance(*test.colors, *reference.colors);
}

MetricsReport compute_metrics(const PointCloud& test, const PointCloud& reference, std::size_t k)
{
    MetricsReport r;
    const NormalField ref_normals = estimate_normals(reference, k);
    r.p2p = p2p_error(test, reference);
    r.p2c = p2c_error(test, reference, ref_normals);
    r.c2c = c2c_similarity(test, estimate_normals(test, k), reference, ref_normals);

    if (test.has_colors() && reference.has_colors()) {
        r.has_color = true;
        const KdTree tree(reference.positions);
        std::vector<Rgb> matched;
        matched.reserve(test.size());
        for (const auto& p : test.positions)
            matched.push_back((*reference.colors)[tree.nearest(p).index]);
        r.psnr = color_psnr(*test.colors, matched);
        r.hist_distance = histogram_distance(test, reference);
    }
    return r;
}

} // namespace fsu
