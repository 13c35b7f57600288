#include "umap/knn_graph.hpp"

#include <algorithm>
#include <cmath>

namespace umap {

namespace {

// Ties broken by lower index so results are deterministic.
bool closer(const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.index < b.index;
}

std::vector<Neighbor> nearest_of(const DataMatrix& data, Index i, int k) {
    std::vector<Neighbor> cand;
    cand.reserve(static_cast<std::size_t>(data.n() - 1));
    for (Index j = 0; j < data.n(); ++j) {
        if (j == i) continue;
        cand.push_back({j, data.distance(i, j)});
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end(), closer);
    cand.resize(static_cast<std::size_t>(k));
    return cand;
}

} // namespace

NeighborGraph build_knn(const DataMatrix& data, int k) {
    const Index n = data.n();
    if (k < 1) throw ParameterError("k must be >= 1");
    if (static_cast<Index>(k) >= n)
        throw ParameterError("k must be smaller than the number of points");

    NeighborGraph g;
    g.k = k;
    g.neighbors.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) g.neighbors[static_cast<std::size_t>(i)] = nearest_of(data, i, k);
    return g;
}

std::vector<Index> insert_batch(NeighborGraph& graph, DataMatrix& data,
                                const DataMatrix& new_points) {
    if (new_points.dim() != data.dim())
        throw ParameterError("new points dimensionality does not match dataset");

    const Index n_old = data.n();
    const Index n_new = new_points.n();
    const Index n = n_old + n_new;
    const int k = graph.k;
    if (static_cast<Index>(k) >= n)
        throw ParameterError("k must be smaller than the number of points");

    Eigen::MatrixXd merged(n, data.dim());
    merged.topRows(n_old) = data.values;
    merged.bottomRows(n_new) = new_points.values;
    data.values = std::move(merged);

    std::vector<Index> updated;

    // Existing points: new arrivals can only displace tail entries.
    for (Index i = 0; i < n_old; ++i) {
        auto& list = graph.neighbors[static_cast<std::size_t>(i)];
        bool changed = false;
        for (Index j = n_old; j < n; ++j) {
            Neighbor cand{j, data.distance(i, j)};
            if (closer(cand, list.back())) {
                auto pos = std::upper_bound(list.begin(), list.end(), cand, closer);
                list.insert(pos, cand);
                list.pop_back();
                changed = true;
            }
        }
        if (changed) updated.push_back(i);
    }

    // New points get full lists against the merged dataset.
    graph.neighbors.resize(static_cast<std::size_t>(n));
    for (Index i = n_old; i < n; ++i) {
        graph.neighbors[static_cast<std::size_t>(i)] = nearest_of(data, i, k);
        updated.push_back(i);
    }
    return updated;
}

} // namespace umap
