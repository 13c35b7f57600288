#include "umap/progressive.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "umap/kernel.hpp"
#include "umap/rng.hpp"
#include "umap/spectral.hpp"

namespace umap {

namespace {

void clip_to_norm(Eigen::RowVectorXd& g, double max_norm) {
    const double norm = g.norm();
    if (norm > max_norm) g *= max_norm / norm;
}

// Localized SGD over the anchor set, fixed learning rate, no schedule.
// Positive partners move only when update_positives is set; negative
// samples are never moved here.
void optimize_anchors(StreamState& state, const std::vector<Index>& anchors,
                      const RunConfig& config, bool update_positives) {
    const Index n = state.accumulated.n();
    const KernelParams kp{config.a, config.b, config.eps};
    const double eta = config.stream_eta;
    const std::uint64_t stream_seed =
        splitmix64(config.seed ^ (0x517EA11Dull + static_cast<std::uint64_t>(state.batch_counter)));

    for (int epoch = 0; epoch < config.stream_epochs; ++epoch) {
        for (Index i : anchors) {
            for (const auto& [j, pij] : state.fuzzy.adj[static_cast<std::size_t>(i)]) {
                CounterRng rng(stream_seed, static_cast<std::uint64_t>(epoch),
                               static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
                if (rng.uniform01() > pij) continue;

                Eigen::RowVectorXd ga = grad_attractive(state.embedding.coords.row(i),
                                                        state.embedding.coords.row(j), kp);
                if (config.clip_gradients) clip_to_norm(ga, config.clip_norm);
                state.embedding.coords.row(i) -= eta * ga;
                if (update_positives) state.embedding.coords.row(j) += eta * ga;

                for (int t = 0; t < config.negative_samples; ++t) {
                    const Index l =
                        static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
                    Eigen::RowVectorXd gr = grad_repulsive(state.embedding.coords.row(i),
                                                           state.embedding.coords.row(l), kp);
                    if (config.clip_gradients) clip_to_norm(gr, config.clip_norm);
                    state.embedding.coords.row(i) -= eta * gr;
                }

                if (!state.embedding.coords.row(i).allFinite())
                    throw NumericalDivergenceError("non-finite coordinate during streaming, anchor " +
                                                   std::to_string(i));
            }
        }
    }
}

std::vector<Index> ingest_internal(StreamState& state, const DataMatrix& batch,
                                   const RunConfig& config) {
    if (state.accumulated.n() == 0) {
        if (batch.n() <= static_cast<Index>(config.k))
            throw ParameterError("first batch must contain more than k points");
        state.accumulated = batch;
        state.graph = build_knn(state.accumulated, config.k);
        state.fuzzy = build_fuzzy(state.graph, state.accumulated, config.k);
        state.embedding = spectral_embed(state.fuzzy, config.embed_dim, config.seed);
        std::vector<Index> anchors(static_cast<std::size_t>(state.accumulated.n()));
        for (Index i = 0; i < state.accumulated.n(); ++i)
            anchors[static_cast<std::size_t>(i)] = i;
        return anchors;
    }

    if (batch.dim() != state.accumulated.dim())
        throw ParameterError("batch dimensionality does not match accumulated data");
    if (batch.n() == 0) return {};

    const Index n_old = state.accumulated.n();
    auto updated = insert_batch(state.graph, state.accumulated, batch);
    refresh_fuzzy(state.fuzzy, state.graph, state.accumulated, config.k, updated);

    const Index n = state.accumulated.n();
    Eigen::MatrixXd coords(n, state.embedding.dim());
    coords.topRows(n_old) = state.embedding.coords;
    for (Index i = n_old; i < n; ++i) {
        // Nearest previously accumulated point, ties to the lower index.
        Index best = 0;
        double best_dist = state.accumulated.distance(i, 0);
        for (Index j = 1; j < n_old; ++j) {
            const double d = state.accumulated.distance(i, j);
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        CounterRng noise(config.seed, 0xA11CEull,
                         static_cast<std::uint64_t>(state.batch_counter),
                         static_cast<std::uint64_t>(i));
        coords.row(i) = coords.row(best);
        for (Index c = 0; c < coords.cols(); ++c)
            coords(i, c) += config.stream_noise_std * noise.normal();
    }
    state.embedding.coords = std::move(coords);
    return updated;
}

} // namespace

void ingest_batch(StreamState& state, const DataMatrix& batch, const RunConfig& config) {
    config.validate();
    auto anchors = ingest_internal(state, batch, config);
    optimize_anchors(state, anchors, config, config.stream_update_positives);
    ++state.batch_counter;
}

Embedding embed_out_of_sample(const StreamState& state, const DataMatrix& points,
                              const RunConfig& config) {
    config.validate();
    if (state.accumulated.n() == 0) throw ParameterError("stream state is untrained");
    if (points.n() == 0) return Embedding(0, state.embedding.dim());

    StreamState scratch = state;
    const Index n_old = scratch.accumulated.n();
    ingest_internal(scratch, points, config);

    // Frozen training structures: only the new points are anchors, and
    // neither positives nor negatives move.
    std::vector<Index> anchors;
    for (Index i = n_old; i < scratch.accumulated.n(); ++i) anchors.push_back(i);
    optimize_anchors(scratch, anchors, config, /*update_positives=*/false);

    Embedding out(points.n(), scratch.embedding.dim());
    out.coords = scratch.embedding.coords.bottomRows(points.n());
    return out;
}

} // namespace umap
