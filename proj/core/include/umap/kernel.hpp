#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace umap {

struct KernelParams {
    double a = 1.929;
    double b = 0.7915;
    double eps = 0.001;
};

// ||delta||^(2t) evaluated from the squared norm; the d2 = 0 branch is
// short-circuited before the log.
inline double pow_sq(double d2, double t) {
    return d2 <= 0.0 ? 0.0 : std::exp(t * std::log(d2));
}

/// Embedding-space similarity, in (0, 1].
inline double q_from_d2(double d2, const KernelParams& kp) {
    return 1.0 / (1.0 + kp.a * pow_sq(d2, kp.b));
}

inline double q(const Eigen::RowVectorXd& yi, const Eigen::RowVectorXd& yj,
                const KernelParams& kp) {
    return q_from_d2((yi - yj).squaredNorm(), kp);
}

/// -ln(q).
inline double cost_attractive_d2(double d2, const KernelParams& kp) {
    return std::log1p(kp.a * pow_sq(d2, kp.b));
}

/// -ln(1 - q), with 1 - q clamped below at 1e-12 near coincident points.
inline double cost_repulsive_d2(double d2, const KernelParams& kp) {
    const double one_minus_q = std::max(1.0 - q_from_d2(d2, kp), 1e-12);
    return -std::log(one_minus_q);
}

inline double cost_attractive(const Eigen::RowVectorXd& yi, const Eigen::RowVectorXd& yj,
                              const KernelParams& kp) {
    return cost_attractive_d2((yi - yj).squaredNorm(), kp);
}

inline double cost_repulsive(const Eigen::RowVectorXd& yi, const Eigen::RowVectorXd& yj,
                             const KernelParams& kp) {
    return cost_repulsive_d2((yi - yj).squaredNorm(), kp);
}

// Gradients factor as coeff(d2) * (yi - yj). Coincident points get a zero
// coefficient: the b < 1 attractive singularity is resolved by no
// displacement, and the repulsive direction is undefined at delta = 0.

inline double attractive_coeff(double d2, const KernelParams& kp) {
    if (d2 <= 0.0) return 0.0;
    return 2.0 * kp.a * kp.b * pow_sq(d2, kp.b - 1.0) / (1.0 + kp.a * pow_sq(d2, kp.b));
}

inline double repulsive_coeff(double d2, const KernelParams& kp) {
    if (d2 <= 0.0) return 0.0;
    return -2.0 * kp.b / ((kp.eps + d2) * (1.0 + kp.a * pow_sq(d2, kp.b)));
}

/// d(c^a)/d(yi); the partner derivative w.r.t. yj is the negation.
inline Eigen::RowVectorXd grad_attractive(const Eigen::RowVectorXd& yi,
                                          const Eigen::RowVectorXd& yj,
                                          const KernelParams& kp) {
    const Eigen::RowVectorXd delta = yi - yj;
    return attractive_coeff(delta.squaredNorm(), kp) * delta;
}

/// d(c^r)/d(yi); the partner derivative w.r.t. yj is the negation.
inline Eigen::RowVectorXd grad_repulsive(const Eigen::RowVectorXd& yi,
                                         const Eigen::RowVectorXd& yj,
                                         const KernelParams& kp) {
    const Eigen::RowVectorXd delta = yi - yj;
    return repulsive_coeff(delta.squaredNorm(), kp) * delta;
}

} // namespace umap
