#pragma once

#include <vector>

#include "umap/types.hpp"

namespace umap {

struct Neighbor {
    Index index;
    double distance;
};

/// Exact kNN graph: per point, the k nearest neighbors sorted by
/// (distance, index) ascending. A point never lists itself.
struct NeighborGraph {
    int k = 0;
    std::vector<std::vector<Neighbor>> neighbors;

    Index n() const { return static_cast<Index>(neighbors.size()); }
};

NeighborGraph build_knn(const DataMatrix& data, int k);

/// Appends new_points to data, updates the graph exactly, and returns the
/// indices whose neighbor lists changed: every displaced pre-existing point
/// plus all new points. Sorted ascending.
std::vector<Index> insert_batch(NeighborGraph& graph, DataMatrix& data,
                                const DataMatrix& new_points);

} // namespace umap
