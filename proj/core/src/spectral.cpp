#include "umap/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace umap {

namespace {

constexpr double kTargetColumnStd = 1e-2;

std::vector<std::vector<Index>> connected_components(const FuzzyGraph& fg) {
    const Index n = fg.n();
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<Index>> components;
    std::vector<Index> stack;
    for (Index start = 0; start < n; ++start) {
        if (comp[static_cast<std::size_t>(start)] >= 0) continue;
        const int id = static_cast<int>(components.size());
        components.emplace_back();
        stack.push_back(start);
        comp[static_cast<std::size_t>(start)] = id;
        while (!stack.empty()) {
            Index v = stack.back();
            stack.pop_back();
            components[static_cast<std::size_t>(id)].push_back(v);
            for (const auto& [w, p] : fg.adj[static_cast<std::size_t>(v)]) {
                if (comp[static_cast<std::size_t>(w)] < 0) {
                    comp[static_cast<std::size_t>(w)] = id;
                    stack.push_back(w);
                }
            }
        }
    }
    for (auto& c : components) std::sort(c.begin(), c.end());
    return components;
}

// Lowest index whose magnitude is within rounding of the maximum, so exact
// ties resolve deterministically instead of by floating noise.
Index argmax_abs(const Eigen::VectorXd& v) {
    const double max_abs = v.cwiseAbs().maxCoeff();
    const double cutoff = max_abs * (1.0 - 1e-12);
    for (Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) >= cutoff) return i;
    return 0;
}

// Eigenvectors of the component's symmetric normalized Laplacian for the
// p smallest nonzero eigenvalues; tied eigenvalues ordered by the index of
// their largest-magnitude entry, signs fixed positive there.
Eigen::MatrixXd component_eigenvectors(const FuzzyGraph& fg, const std::vector<Index>& comp,
                                       Index p) {
    const Index s = static_cast<Index>(comp.size());
    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(s, s);
    Eigen::VectorXd degree(s);
    for (Index a = 0; a < s; ++a) {
        double deg = 0.0;
        for (Index b = 0; b < s; ++b) {
            if (a == b) continue;
            const double pij = fg.weight(comp[static_cast<std::size_t>(a)],
                                         comp[static_cast<std::size_t>(b)]);
            weights(a, b) = pij;
            deg += pij;
        }
        if (deg <= 0.0 && s > 1)
            throw IsolatedPointError("zero-degree point in fuzzy graph");
        degree(a) = deg;
    }

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(s, p);
    if (s == 1) return out;

    Eigen::VectorXd dinv_sqrt = degree.array().sqrt().inverse().matrix();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(s, s) -
                          dinv_sqrt.asDiagonal() * weights * dinv_sqrt.asDiagonal();
    // Symmetrize floating slop before the self-adjoint solve.
    lap = 0.5 * (lap + lap.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    Eigen::VectorXd vals = solver.eigenvalues();
    Eigen::MatrixXd vecs = solver.eigenvectors();

    // Deterministic order inside tie groups.
    std::vector<Index> order(static_cast<std::size_t>(s));
    std::iota(order.begin(), order.end(), Index{0});
    const double tie_tol = 1e-9 * std::max(1.0, std::abs(vals(s - 1)));
    Index g0 = 0;
    auto sort_group = [&](Index lo, Index hi) {
        std::sort(order.begin() + lo, order.begin() + hi, [&](Index x, Index y) {
            return argmax_abs(vecs.col(x)) < argmax_abs(vecs.col(y));
        });
    };
    for (Index i = 1; i < s; ++i) {
        if (vals(i) - vals(g0) > tie_tol) {
            sort_group(g0, i);
            g0 = i;
        }
    }
    sort_group(g0, s);

    // A connected component has exactly one zero eigenvalue; skip it.
    Index taken = 0;
    for (Index r = 1; r < s && taken < p; ++r, ++taken) {
        Eigen::VectorXd v = vecs.col(order[static_cast<std::size_t>(r)]);
        if (v(argmax_abs(v)) < 0.0) v = -v;
        out.col(taken) = v;
    }
    return out;
}

void rescale_column_std(Eigen::Ref<Eigen::MatrixXd> m) {
    const double n = static_cast<double>(m.rows());
    for (Index c = 0; c < m.cols(); ++c) {
        const double mean = m.col(c).mean();
        const double var = (m.col(c).array() - mean).square().sum() / n;
        if (var > 0.0) m.col(c) *= kTargetColumnStd / std::sqrt(var);
    }
}

} // namespace

Embedding spectral_embed(const FuzzyGraph& fg, Index embed_dim, std::uint64_t seed) {
    (void)seed; // reserved for iterative-solver starting vectors
    const Index n = fg.n();
    if (embed_dim < 1) throw ParameterError("embedding dimension must be >= 1");
    if (embed_dim >= n) throw ParameterError("embedding dimension must be smaller than n");
    for (Index i = 0; i < n; ++i)
        if (fg.adj[static_cast<std::size_t>(i)].empty())
            throw IsolatedPointError("zero-degree point in fuzzy graph");

    auto components = connected_components(fg);
    Embedding emb(n, embed_dim);

    std::vector<Eigen::MatrixXd> blocks;
    blocks.reserve(components.size());
    double max_range = 0.0;
    for (const auto& comp : components) {
        Eigen::MatrixXd block = component_eigenvectors(fg, comp, embed_dim);
        rescale_column_std(block);
        if (components.size() > 1) {
            // Per-component coordinate range drives the separation offset.
            for (Index c = 0; c < block.cols(); ++c)
                max_range = std::max(max_range, block.col(c).maxCoeff() - block.col(c).minCoeff());
        }
        blocks.push_back(std::move(block));
    }

    if (components.size() == 1) {
        const auto& comp = components.front();
        for (std::size_t r = 0; r < comp.size(); ++r)
            emb.coords.row(comp[r]) = blocks.front().row(static_cast<Index>(r));
    } else {
        // Center each component and spread centroids along the first axis.
        const double spacing = 10.0 * (max_range > 0.0 ? max_range : kTargetColumnStd);
        const double mean_offset =
            spacing * (static_cast<double>(components.size()) - 1.0) / 2.0;
        for (std::size_t c = 0; c < components.size(); ++c) {
            Eigen::MatrixXd block = blocks[c];
            block.rowwise() -= block.colwise().mean();
            block.col(0).array() += spacing * static_cast<double>(c) - mean_offset;
            const auto& comp = components[c];
            for (std::size_t r = 0; r < comp.size(); ++r)
                emb.coords.row(comp[r]) = block.row(static_cast<Index>(r));
        }
    }

    rescale_column_std(emb.coords);
    return emb;
}

} // namespace umap
