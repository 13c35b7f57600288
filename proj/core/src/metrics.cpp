#include "umap/metrics.hpp"

#include <algorithm>

#include "umap/knn_graph.hpp"

namespace umap {

double knn_preservation(const DataMatrix& data, const Embedding& emb, int k) {
    if (data.n() != emb.n()) throw ParameterError("data/embedding size mismatch");
    const auto g_data = build_knn(data, k);
    const auto g_emb = build_knn(DataMatrix(emb.coords), k);

    double total = 0.0;
    std::vector<Index> a, b;
    for (Index i = 0; i < data.n(); ++i) {
        a.clear();
        b.clear();
        for (const auto& nb : g_data.neighbors[static_cast<std::size_t>(i)]) a.push_back(nb.index);
        for (const auto& nb : g_emb.neighbors[static_cast<std::size_t>(i)]) b.push_back(nb.index);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        std::vector<Index> common;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
        total += static_cast<double>(common.size()) / static_cast<double>(k);
    }
    return total / static_cast<double>(data.n());
}

double label_agreement(const Embedding& emb, const std::vector<int>& labels, int k) {
    if (static_cast<Index>(labels.size()) != emb.n())
        throw ParameterError("labels missing or of wrong length");
    const auto g = build_knn(DataMatrix(emb.coords), k);

    double total = 0.0;
    for (Index i = 0; i < emb.n(); ++i) {
        int same = 0;
        for (const auto& nb : g.neighbors[static_cast<std::size_t>(i)])
            if (labels[static_cast<std::size_t>(nb.index)] == labels[static_cast<std::size_t>(i)])
                ++same;
        total += static_cast<double>(same) / static_cast<double>(k);
    }
    return total / static_cast<double>(emb.n());
}

} // namespace umap
