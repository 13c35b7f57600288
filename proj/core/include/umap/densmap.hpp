#pragma once

#include <span>
#include <vector>

#include "umap/fuzzy_graph.hpp"
#include "umap/kernel.hpp"
#include "umap/types.hpp"

namespace umap {

/// Per-point log local radii and their means; refreshed once per epoch.
struct DensityState {
    std::vector<double> r_p;
    std::vector<double> r_q;
    double mu_p = 0.0;
    double mu_q = 0.0;
    double lambda = 0.0;
};

/// Expected squared input-space distance to neighbors under p_ij.
double local_radius_p(const FuzzyGraph& fg, const DataMatrix& data, Index i);

/// Expected squared embedding-space distance to the same stored neighbors
/// under q_ij.
double local_radius_q(const Embedding& emb, const FuzzyGraph& fg, const KernelParams& kp,
                      Index i);

std::vector<double> log_radii_p(const FuzzyGraph& fg, const DataMatrix& data);
std::vector<double> log_radii_q(const Embedding& emb, const FuzzyGraph& fg,
                                const KernelParams& kp);

/// Pearson correlation with the 1/(n-1) convention; throws
/// DegenerateDensityError on zero variance.
double correlation(std::span<const double> r_q, std::span<const double> r_p);

/// exact_loss - lambda * Corr(r_q, r_p); declared in optimizer.hpp's
/// exact_loss for the first term.
double densmap_loss(const Embedding& emb, const FuzzyGraph& fg, const DataMatrix& data,
                    const KernelParams& kp, double lambda);

/// Gradient of -lambda * Corr(r_q, r_p) for every point (n x p); zero on
/// degenerate variance.
Eigen::MatrixXd densmap_gradient_all(const Embedding& emb, const FuzzyGraph& fg,
                                     const DataMatrix& data, const KernelParams& kp,
                                     double lambda);

Eigen::RowVectorXd densmap_gradient(const Embedding& emb, const FuzzyGraph& fg,
                                    const DataMatrix& data, const KernelParams& kp,
                                    double lambda, Index i);

} // namespace umap
