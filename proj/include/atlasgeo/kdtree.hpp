#pragma once

#include <vector>

#include "atlasgeo/types.hpp"

namespace atlasgeo {

/**
 * Static k-d tree over a fixed point set, exact nearest-neighbor queries.
 * Distance ties are broken by lower point index, so results match a
 * brute-force scan ordered by (distance, index).
 */
class KdTree {
public:
    explicit KdTree(const std::vector<Vec>& points);

    /// Indices of the k nearest points to q (excluding exclude_index if
    /// >= 0), sorted by (distance, index). Returns fewer than k only when
    /// the tree has fewer eligible points.
    std::vector<int> nearest(const Vec& q, int k, int exclude_index = -1) const;

    size_t size() const { return points_->size(); }

private:
    struct Node {
        int point = -1;
        int axis = 0;
        int left = -1;
        int right = -1;
    };

    struct Candidate {
        double dist2;
        int index;
        bool operator<(const Candidate& o) const {
            return dist2 < o.dist2 || (dist2 == o.dist2 && index < o.index);
        }
    };

    int build(std::vector<int>& idx, int lo, int hi, int depth);
    void search(int node, const Vec& q, int k, int exclude, std::vector<Candidate>& heap) const;

    const std::vector<Vec>* points_;
    std::vector<Node> nodes_;
    int root_ = -1;
    int dim_ = 0;
};

/// Exact k nearest neighbors of every point among the others, Euclidean
/// distance, ties by lower index. Requires len(points) >= k+1.
std::vector<std::vector<int>> knn(const std::vector<Vec>& points, int k);

}  // namespace atlasgeo
