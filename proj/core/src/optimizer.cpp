#include "umap/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "umap/densmap.hpp"
#include "umap/rng.hpp"

namespace umap {

namespace {

void clip_to_norm(Eigen::RowVectorXd& g, double max_norm) {
    const double norm = g.norm();
    if (norm > max_norm) g *= max_norm / norm;
}

} // namespace

double exact_loss(const Embedding& emb, const FuzzyGraph& fg, const KernelParams& kp) {
    const Index n = emb.n();
    double loss = 0.0;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const double pij = fg.weight(i, j);
            const double d2 = (emb.coords.row(i) - emb.coords.row(j)).squaredNorm();
            if (pij > 0.0) loss += pij * cost_attractive_d2(d2, kp);
            if (pij < 1.0) loss += (1.0 - pij) * cost_repulsive_d2(d2, kp);
        }
    }
    return loss;
}

double effective_repulsive_weight(double d_i, double d_j, int m, Index n) {
    if (n <= 0) throw ParameterError("n must be positive");
    return (d_i + d_j) * static_cast<double>(m) / (2.0 * static_cast<double>(n));
}

std::vector<EdgeWeights> expected_gradient_weights(const FuzzyGraph& fg, int m) {
    const Index n = fg.n();
    std::vector<EdgeWeights> out;
    for (Index i = 0; i < n; ++i) {
        for (const auto& [j, p] : fg.adj[static_cast<std::size_t>(i)]) {
            const double rep = fg.degree[static_cast<std::size_t>(i)] *
                               static_cast<double>(m) / (2.0 * static_cast<double>(n));
            out.push_back({i, j, p, rep});
        }
    }
    return out;
}

SgdOptimizer::SgdOptimizer(Embedding& embedding, const FuzzyGraph& fg, const RunConfig& config,
                           const DataMatrix* data_for_density)
    : embedding_(embedding), fg_(fg), config_(config),
      kp_{config.a, config.b, config.eps}, data_(data_for_density) {
    config_.validate();
    if (config_.densmap_lambda > 0.0 && data_ == nullptr)
        throw ParameterError("density regularization needs the input data");
    if (embedding_.n() != fg_.n()) throw ParameterError("embedding/graph size mismatch");
}

EpochReport SgdOptimizer::run_epoch() {
    const Index n = embedding_.n();
    const int m = config_.negative_samples;
    EpochReport report;
    report.epoch = epoch_;

    // Density regularizer: refresh once per epoch, apply before the pair loop.
    if (config_.densmap_lambda > 0.0) {
        const auto r_p = log_radii_p(fg_, *data_);
        const auto r_q = log_radii_q(embedding_, fg_, kp_);
        try {
            report.density_correlation = correlation(r_q, r_p);
        } catch (const DegenerateDensityError&) {
            // correlation gradient treated as zero below
        }
        Eigen::MatrixXd dgrad =
            densmap_gradient_all(embedding_, fg_, *data_, kp_, config_.densmap_lambda);
        for (Index i = 0; i < n; ++i) {
            Eigen::RowVectorXd g = dgrad.row(i);
            if (config_.clip_gradients) clip_to_norm(g, config_.clip_norm);
            embedding_.coords.row(i) -= eta_ * g;
        }
    }

    for (Index i = 0; i < n; ++i) {
        for (const auto& [j, pij] : fg_.adj[static_cast<std::size_t>(i)]) {
            CounterRng rng(config_.seed, static_cast<std::uint64_t>(epoch_),
                           static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
            if (rng.uniform01() > pij) continue;

            Eigen::RowVectorXd ga = grad_attractive(embedding_.coords.row(i),
                                                    embedding_.coords.row(j), kp_);
            if (config_.clip_gradients) clip_to_norm(ga, config_.clip_norm);
            embedding_.coords.row(i) -= eta_ * ga;
            embedding_.coords.row(j) += eta_ * ga;
            ++report.attractive_updates;

            for (int t = 0; t < m; ++t) {
                const Index l = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
                Eigen::RowVectorXd gr = grad_repulsive(embedding_.coords.row(i),
                                                       embedding_.coords.row(l), kp_);
                if (config_.effective_weights) {
                    const double pil = fg_.weight(i, l);
                    const double eff = effective_repulsive_weight(
                        fg_.degree[static_cast<std::size_t>(i)],
                        fg_.degree[static_cast<std::size_t>(l)], m, n);
                    const double scale =
                        std::clamp(eff / std::max(1.0 - pil, 1e-12), 0.0, 1.0);
                    gr *= scale;
                }
                if (config_.clip_gradients) clip_to_norm(gr, config_.clip_norm);
                embedding_.coords.row(i) -= eta_ * gr;
                if (config_.update_negatives) embedding_.coords.row(l) += eta_ * gr;
                ++report.repulsive_updates;
            }

            if (!embedding_.coords.row(i).allFinite() || !embedding_.coords.row(j).allFinite())
                throw NumericalDivergenceError("non-finite coordinate at epoch " +
                                               std::to_string(epoch_) + ", pair (" +
                                               std::to_string(i) + ", " + std::to_string(j) + ")");
        }
    }

    report.exact_loss = exact_loss(embedding_, fg_, kp_);

    ++epoch_;
    eta_ = 1.0 - static_cast<double>(epoch_) / static_cast<double>(config_.epochs);
    return report;
}

} // namespace umap
