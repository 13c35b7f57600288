#pragma once

#include <span>
#include <utility>
#include <vector>

#include "umap/knn_graph.hpp"
#include "umap/types.hpp"

namespace umap {

/// Sparse symmetric fuzzy similarity graph. Edges exist exactly where
/// j is in N_i or i is in N_j; absent pairs mean p_ij = 0.
struct FuzzyGraph {
    std::vector<double> rho;       // nearest-neighbor distance per point
    std::vector<double> sigma;     // calibrated scale per point
    std::vector<double> degree;    // d_i = sum_j p_ij
    std::vector<double> residual;  // calibration residual per point
    std::vector<char> saturated;   // no interior sigma existed; clamped to bracket

    // Directional p_{j|i}, aligned with the kNN neighbor lists.
    std::vector<std::vector<double>> directional;

    // Symmetrized adjacency, neighbor indices ascending per point.
    std::vector<std::vector<std::pair<Index, double>>> adj;

    Index n() const { return static_cast<Index>(adj.size()); }

    /// p_ij, 0 when the edge is not stored or i == j.
    double weight(Index i, Index j) const;

    /// Unique undirected edges (i < j) in lexicographic order.
    struct Edge {
        Index i, j;
        double p;
    };
    std::vector<Edge> edges() const;
};

/// Minimum of point i's k neighbor distances.
double compute_rho(const NeighborGraph& graph, Index i);

struct SigmaResult {
    double sigma;
    double residual;
    bool saturated;
};

/// Bisection for sigma so the shifted-exponential memberships sum to log2(k).
/// Clamps to the bracket when no interior solution exists.
SigmaResult calibrate_sigma(std::span<const double> distances, double rho, int k,
                            double tol, double sigma_min, double sigma_max);

/// Eq.-(1)-style directional membership of j as seen from i; 0 when j is not
/// in N_i.
double directional_p(const NeighborGraph& graph, std::span<const double> rho,
                     std::span<const double> sigma, Index i, Index j);

/// Fuzzy union of the two directional memberships.
inline double symmetrize(double p_ji, double p_ij) { return p_ji + p_ij - p_ji * p_ij; }

FuzzyGraph build_fuzzy(const NeighborGraph& graph, const DataMatrix& data, int k);

/// Recomputes rho/sigma/directional memberships for the given points only
/// (after a graph update) and re-symmetrizes. Entries not touching any of the
/// given points are reproduced bit-identically.
void refresh_fuzzy(FuzzyGraph& fg, const NeighborGraph& graph, const DataMatrix& data,
                   int k, const std::vector<Index>& points);

} // namespace umap
