#include "fsu/kdtree.hpp"

#include <algorithm>
#include <numeric>

namespace fsu {

namespace {

constexpr std::size_t kLeafSize = 12;

bool closer(const Neighbor& a, const Neighbor& b)
{
    return a.distance_sq != b.distance_sq ? a.distance_sq < b.distance_sq : a.index < b.index;
}

double dist_sq(const Vec3& a, const Vec3& b)
{
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return dx * dx + dy * dy + dz * dz;
}

} // namespace

KdTree::KdTree(std::span<const Vec3> points) : points_(points.begin(), points.end()), order_(points.size())
{
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (!points_.empty())
        build(0, points_.size(), 0);
}

int KdTree::build(std::size_t begin, std::size_t end, int depth)
{
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (end - begin <= kLeafSize) {
        nodes_[id].begin = begin;
        nodes_[id].end = end;
        return id;
    }

    // split along the widest extent
    Vec3 lo = points_[order_[begin]], hi = lo;
    for (std::size_t i = begin; i < end; ++i)
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], points_[order_[i]][a]);
            hi[a] = std::max(hi[a], points_[order_[i]][a]);
        }
    int axis = 0;
    for (int a = 1; a < 3; ++a)
        if (hi[a] - lo[a] > hi[axis] - lo[axis])
            axis = a;
    (void)depth;

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::size_t a, std::size_t b) { return points_[a][axis] < points_[b][axis]; });
    const double split = points_[order_[mid]][axis];

    const int left = build(begin, mid, depth + 1);
    const int right = build(mid, end, depth + 1);
    nodes_[id].axis = axis;
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

void KdTree::search(int node_id, const Vec3& q, std::size_t k, std::vector<Neighbor>& heap) const
{
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
        for (std::size_t i = node.begin; i < node.end; ++i) {
            const Neighbor cand{order_[i], dist_sq(points_[order_[i]], q)};
            if (heap.size() < k) {
                heap.push_back(cand);
                std::push_heap(heap.begin(), heap.end(), closer);
            } else if (closer(cand, heap.front())) {
                std::pop_heap(heap.begin(), heap.end(), closer);
                heap.back() = cand;
                std::push_heap(heap.begin(), heap.end(), closer);
            }
        }
        return;
    }

    // Left holds coordinates <= split, right holds >= split.
    const double diff = q[node.axis] - node.split;
    const int near = diff < 0 ? node.left : node.right;
    const int far = diff < 0 ? node.right : node.left;
    search(near, q, k, heap);
    // <= keeps equidistant candidates with lower indices reachable
    if (heap.size() < k || diff * diff <= heap.front().distance_sq)
        search(far, q, k, heap);
}

Neighbor KdTree::nearest(const Vec3& q) const
{
    if (points_.empty())
        throw Error("nearest-neighbor query on an empty tree");
    return knn(q, 1).front();
}

std::vector<Neighbor> KdTree::knn(const Vec3& q, std::size_t k) const
{
    std::vector<Neighbor> heap;
    k = std::min(k, points_.size());
    if (k == 0)
        return heap;
    heap.reserve(k);
    search(0, q, k, heap);
    std::sort_heap(heap.begin(), heap.end(), closer);
    return heap;
}

} // namespace fsu
