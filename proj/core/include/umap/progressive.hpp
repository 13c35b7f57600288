#pragma once

#include "umap/fuzzy_graph.hpp"
#include "umap/knn_graph.hpp"
#include "umap/types.hpp"

namespace umap {

/// Streaming state: all four structures describe the same accumulated point
/// set.
struct StreamState {
    DataMatrix accumulated;
    NeighborGraph graph;
    FuzzyGraph fuzzy;
    Embedding embedding;
    int batch_counter = 0;
};

/// Ingest a batch: exact incremental kNN update, fuzzy refresh for new and
/// displaced points, nearest-neighbor + Gaussian-noise initialization for
/// new points (spectral for the first batch), then localized SGD with the
/// new/updated points as anchors.
void ingest_batch(StreamState& state, const DataMatrix& batch, const RunConfig& config);

/// Embeds unseen points with the training structures frozen: only the new
/// points move. Returns coordinates of the new points only.
Embedding embed_out_of_sample(const StreamState& state, const DataMatrix& points,
                              const RunConfig& config);

} // namespace umap
