#pragma once

#include <limits>
#include <vector>

#include "umap/fuzzy_graph.hpp"
#include "umap/kernel.hpp"
#include "umap/types.hpp"

namespace umap {

struct EpochReport {
    int epoch = 0;
    double exact_loss = 0.0;
    long attractive_updates = 0;
    long repulsive_updates = 0;
    // NaN unless the density regularizer is active.
    double density_correlation = std::numeric_limits<double>::quiet_NaN();
};

/// Eq.-(8)-style exact cross-entropy over all ordered pairs; O(n^2),
/// diagnostic only.
double exact_loss(const Embedding& emb, const FuzzyGraph& fg, const KernelParams& kp);

/// The coefficient negative-sampling SGD implicitly assigns to a repulsive
/// edge in expectation: (d_i + d_j) * m / (2n).
double effective_repulsive_weight(double d_i, double d_j, int m, Index n);

struct EdgeWeights {
    Index i, j;          // ordered pair
    double attractive;   // p_ij
    double repulsive;    // d_i * m / (2n)
};

/// Per-ordered-pair expected update weights over the stored edges; doubling
/// over ordered pairs reproduces the expected-gradient sum.
std::vector<EdgeWeights> expected_gradient_weights(const FuzzyGraph& fg, int m);

/// Sampling-based SGD over the fuzzy graph: per ordered pair (i, j), an
/// attractive update fires with probability p_ij, followed by m uniformly
/// sampled repulsive updates on the anchor. Draws are keyed per
/// (epoch, i, j) by a counter-based generator, so iterating stored edges
/// only consumes exactly the draws of the literal double loop.
class SgdOptimizer {
public:
    SgdOptimizer(Embedding& embedding, const FuzzyGraph& fg, const RunConfig& config,
                 const DataMatrix* data_for_density = nullptr);

    EpochReport run_epoch();

    int epoch() const { return epoch_; }
    double eta() const { return eta_; }

private:
    Embedding& embedding_;
    const FuzzyGraph& fg_;
    RunConfig config_;
    KernelParams kp_;
    const DataMatrix* data_;
    int epoch_ = 0;
    double eta_ = 1.0;
};

} // namespace umap
