#include "umap/fuzzy_graph.hpp"

#include <algorithm>
#include <cmath>

namespace umap {

namespace {

constexpr double kCalibrationTol = 1e-5;
constexpr int kMaxBisectIters = 100;

double membership_sum(std::span<const double> distances, double rho, double sigma) {
    double sum = 0.0;
    for (double d : distances) {
        // Eq.-(2) guarantees d >= rho analytically; clamp floating slop.
        const double shifted = std::max(d - rho, 0.0);
        sum += std::exp(-shifted / sigma);
    }
    return sum;
}

// Calibration is a pure function of the point's own neighbor list: the
// bracket derives from its mean nonzero neighbor distance (fallback 1 for
// all-duplicate neighborhoods), so a point recalibrates identically in any
// graph whose list for it is unchanged.
void calibrate_point(FuzzyGraph& fg, const NeighborGraph& graph, Index i) {
    const auto& list = graph.neighbors[static_cast<std::size_t>(i)];
    std::vector<double> dists(list.size());
    double dist_sum = 0.0;
    std::size_t nonzero = 0;
    for (std::size_t s = 0; s < list.size(); ++s) {
        dists[s] = list[s].distance;
        if (dists[s] > 0.0) {
            dist_sum += dists[s];
            ++nonzero;
        }
    }
    const double mean_dist = nonzero == 0 ? 1.0 : dist_sum / static_cast<double>(nonzero);
    const double sigma_min = 1e-6 * mean_dist;
    const double sigma_max = 1e3 * mean_dist;

    const double rho = compute_rho(graph, i);
    const auto res = calibrate_sigma(dists, rho, graph.k, kCalibrationTol, sigma_min, sigma_max);

    const auto u = static_cast<std::size_t>(i);
    fg.rho[u] = rho;
    fg.sigma[u] = res.sigma;
    fg.residual[u] = res.residual;
    fg.saturated[u] = res.saturated ? 1 : 0;
    auto& dir = fg.directional[u];
    dir.resize(list.size());
    for (std::size_t s = 0; s < list.size(); ++s) {
        const double shifted = std::max(list[s].distance - rho, 0.0);
        dir[s] = std::min(std::exp(-shifted / fg.sigma[u]), 1.0);
    }
}

double directional_weight(const FuzzyGraph& fg, const NeighborGraph& graph, Index i, Index j) {
    const auto& list = graph.neighbors[static_cast<std::size_t>(i)];
    for (std::size_t s = 0; s < list.size(); ++s)
        if (list[s].index == j) return fg.directional[static_cast<std::size_t>(i)][s];
    return 0.0;
}

// Rebuilds the symmetric adjacency and degrees from the directional
// memberships. Unchanged directional inputs reproduce unchanged edges
// bit-for-bit.
void rebuild_symmetry(FuzzyGraph& fg, const NeighborGraph& graph) {
    const Index n = graph.n();
    std::vector<std::vector<Index>> reverse(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        for (const auto& nb : graph.neighbors[static_cast<std::size_t>(i)])
            reverse[static_cast<std::size_t>(nb.index)].push_back(i);

    fg.adj.assign(static_cast<std::size_t>(n), {});
    fg.degree.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<Index> candidates;
    for (Index i = 0; i < n; ++i) {
        candidates.clear();
        for (const auto& nb : graph.neighbors[static_cast<std::size_t>(i)])
            candidates.push_back(nb.index);
        for (Index j : reverse[static_cast<std::size_t>(i)]) candidates.push_back(j);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        auto& row = fg.adj[static_cast<std::size_t>(i)];
        row.reserve(candidates.size());
        double deg = 0.0;
        for (Index j : candidates) {
            const double pij = symmetrize(directional_weight(fg, graph, i, j),
                                          directional_weight(fg, graph, j, i));
            if (pij > 0.0) {
                row.emplace_back(j, pij);
                deg += pij;
            }
        }
        fg.degree[static_cast<std::size_t>(i)] = deg;
    }
}

} // namespace

double FuzzyGraph::weight(Index i, Index j) const {
    const auto& row = adj[static_cast<std::size_t>(i)];
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const auto& e, Index v) { return e.first < v; });
    return (it != row.end() && it->first == j) ? it->second : 0.0;
}

std::vector<FuzzyGraph::Edge> FuzzyGraph::edges() const {
    std::vector<Edge> out;
    for (Index i = 0; i < n(); ++i)
        for (const auto& [j, p] : adj[static_cast<std::size_t>(i)])
            if (i < j) out.push_back({i, j, p});
    return out;
}

double compute_rho(const NeighborGraph& graph, Index i) {
    const auto& list = graph.neighbors[static_cast<std::size_t>(i)];
    double best = list.front().distance;
    for (const auto& nb : list) best = std::min(best, nb.distance);
    return best;
}

SigmaResult calibrate_sigma(std::span<const double> distances, double rho, int k,
                            double tol, double sigma_min, double sigma_max) {
    if (k < 2) throw ParameterError("sigma calibration requires k >= 2");
    const double target = std::log2(static_cast<double>(k));

    // The membership sum is nondecreasing in sigma.
    const double at_min = membership_sum(distances, rho, sigma_min);
    if (at_min >= target)
        return {sigma_min, at_min - target, true};
    const double at_max = membership_sum(distances, rho, sigma_max);
    if (at_max <= target)
        return {sigma_max, at_max - target, true};

    double lo = sigma_min, hi = sigma_max;
    double mid = 0.5 * (lo + hi);
    double residual = 0.0;
    for (int iter = 0; iter < kMaxBisectIters; ++iter) {
        mid = 0.5 * (lo + hi);
        residual = membership_sum(distances, rho, mid) - target;
        if (std::abs(residual) <= tol) break;
        if (residual > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return {mid, residual, false};
}

double directional_p(const NeighborGraph& graph, std::span<const double> rho,
                     std::span<const double> sigma, Index i, Index j) {
    const auto& list = graph.neighbors[static_cast<std::size_t>(i)];
    for (const auto& nb : list) {
        if (nb.index == j) {
            const double shifted = std::max(nb.distance - rho[static_cast<std::size_t>(i)], 0.0);
            return std::min(std::exp(-shifted / sigma[static_cast<std::size_t>(i)]), 1.0);
        }
    }
    return 0.0;
}

FuzzyGraph build_fuzzy(const NeighborGraph& graph, const DataMatrix& data, int k) {
    (void)data;
    if (k < 2) throw ParameterError("fuzzy graph requires k >= 2");
    if (graph.k != k) throw ParameterError("kNN graph was built with a different k");

    const Index n = graph.n();
    FuzzyGraph fg;
    fg.rho.resize(static_cast<std::size_t>(n));
    fg.sigma.resize(static_cast<std::size_t>(n));
    fg.residual.resize(static_cast<std::size_t>(n));
    fg.saturated.resize(static_cast<std::size_t>(n));
    fg.directional.resize(static_cast<std::size_t>(n));

    for (Index i = 0; i < n; ++i) calibrate_point(fg, graph, i);
    rebuild_symmetry(fg, graph);
    return fg;
}

void refresh_fuzzy(FuzzyGraph& fg, const NeighborGraph& graph, const DataMatrix& data,
                   int k, const std::vector<Index>& points) {
    (void)data;
    const Index n = graph.n();
    fg.rho.resize(static_cast<std::size_t>(n));
    fg.sigma.resize(static_cast<std::size_t>(n));
    fg.residual.resize(static_cast<std::size_t>(n));
    fg.saturated.resize(static_cast<std::size_t>(n));
    fg.directional.resize(static_cast<std::size_t>(n));
    if (graph.k != k) throw ParameterError("kNN graph was built with a different k");

    for (Index i : points) calibrate_point(fg, graph, i);
    rebuild_symmetry(fg, graph);
}

} // namespace umap
