#pragma once

#include <limits>
#include <vector>

#include "umap/types.hpp"

namespace umap {

struct QualityReport {
    double knn_preservation = 0.0;
    // NaN when no labels were provided.
    double label_agreement = std::numeric_limits<double>::quiet_NaN();
    double loss_initial = 0.0;
    double loss_final = 0.0;
};

/// Mean fraction of each point's k input-space neighbors retained in the
/// embedding; exact kNN both sides, ties to the lower index.
double knn_preservation(const DataMatrix& data, const Embedding& emb, int k);

/// Mean fraction of each point's k embedding-space neighbors sharing its
/// label.
double label_agreement(const Embedding& emb, const std::vector<int>& labels, int k);

} // namespace umap
