#include "atlasgeo/kdtree.hpp"

#include <algorithm>
#include <numeric>

namespace atlasgeo {

KdTree::KdTree(const std::vector<Vec>& points) : points_(&points) {
    if (points.empty()) throw usage_error("k-d tree needs at least one point");
    dim_ = static_cast<int>(points.front().size());
    if (dim_ < 1) throw usage_error("k-d tree points must have dimension >= 1");
    for (const Vec& p : points)
        if (static_cast<int>(p.size()) != dim_)
            throw usage_error("k-d tree points have inconsistent dimensions");
    nodes_.reserve(points.size());
    std::vector<int> idx(points.size());
    std::iota(idx.begin(), idx.end(), 0);
    root_ = build(idx, 0, static_cast<int>(idx.size()), 0);
}

int KdTree::build(std::vector<int>& idx, int lo, int hi, int depth) {
    if (lo >= hi) return -1;
    const int axis = depth % dim_;
    const int mid = lo + (hi - lo) / 2;
    const auto& pts = *points_;
    // Total order (coordinate, index) keeps the split deterministic under
    // duplicate coordinates.
    std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                     [&pts, axis](int a, int b) {
                         return pts[a][axis] < pts[b][axis] ||
                                (pts[a][axis] == pts[b][axis] && a < b);
                     });
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{idx[mid], axis, -1, -1});
    const int left = build(idx, lo, mid, depth + 1);
    const int right = build(idx, mid + 1, hi, depth + 1);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
}

void KdTree::search(int node, const Vec& q, int k, int exclude,
                    std::vector<Candidate>& heap) const {
    if (node < 0) return;
    const Node& n = nodes_[node];
    const Vec& p = (*points_)[n.point];

    if (n.point != exclude) {
        const Candidate c{squared_distance(q, p), n.point};
        if (static_cast<int>(heap.size()) < k) {
            heap.push_back(c);
            std::push_heap(heap.begin(), heap.end());
        } else if (c < heap.front()) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = c;
            std::push_heap(heap.begin(), heap.end());
        }
    }

    const double delta = q[n.axis] - p[n.axis];
    const int near = delta < 0.0 ? n.left : n.right;
    const int far = delta < 0.0 ? n.right : n.left;
    search(near, q, k, exclude, heap);
    // Visit the far side on exact ties too: an equidistant point with a
    // lower index must still displace the current worst.
    if (static_cast<int>(heap.size()) < k || delta * delta <= heap.front().dist2)
        search(far, q, k, exclude, heap);
}

std::vector<int> KdTree::nearest(const Vec& q, int k, int exclude_index) const {
    if (k < 1) throw usage_error("k must be >= 1");
    if (static_cast<int>(q.size()) != dim_)
        throw usage_error("query dimension does not match the k-d tree");
    std::vector<Candidate> heap;
    heap.reserve(k);
    search(root_, q, k, exclude_index, heap);
    std::sort(heap.begin(), heap.end());
    std::vector<int> out;
    out.reserve(heap.size());
    for (const Candidate& c : heap) out.push_back(c.index);
    return out;
}

std::vector<std::vector<int>> knn(const std::vector<Vec>& points, int k) {
    if (k < 1) throw usage_error("k must be >= 1");
    if (points.size() < static_cast<size_t>(k) + 1)
        throw usage_error("knn needs at least k+1 points (got " + std::to_string(points.size()) +
                          " for k=" + std::to_string(k) + ")");
    const KdTree tree(points);
    std::vector<std::vector<int>> out(points.size());
    for (size_t i = 0; i < points.size(); ++i)
        out[i] = tree.nearest(points[i], k, static_cast<int>(i));
    return out;
}

}  // namespace atlasgeo
