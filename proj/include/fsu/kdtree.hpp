#pragma once

#include "fsu/core.hpp"

#include <span>
#include <vector>

namespace fsu {

struct Neighbor
{
    std::size_t index = 0;
    double distance_sq = 0.0;
};

/// Static 3D kd-tree. Queries are exact; among equidistant points the lowest
/// index wins, so results match a brute-force scan with the same rule.
class KdTree
{
public:
    KdTree() = default;
    explicit KdTree(std::span<const Vec3> points);

    std::size_t size() const { return points_.size(); }

    Neighbor nearest(const Vec3& q) const;

    /// The k nearest points ordered by (distance, index).
    std::vector<Neighbor> knn(const Vec3& q, std::size_t k) const;

private:
    struct Node
    {
        int axis = -1; // -1 marks a leaf
        double split = 0.0;
        std::size_t begin = 0, end = 0; // leaf range into order_
        int left = -1, right = -1;
    };

    int build(std::size_t begin, std::size_t end, int depth);
    void search(int node, const Vec3& q, std::size_t k, std::vector<Neighbor>& heap) const;

    std::vector<Vec3> points_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

} // namespace fsu
