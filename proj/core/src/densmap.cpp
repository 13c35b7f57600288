#include "umap/densmap.hpp"

#include <cmath>

#include "umap/optimizer.hpp"

namespace umap {

namespace {

constexpr double kRadiusFloor = 1e-300;
constexpr double kVarianceFloor = 1e-30;

double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

struct Moments {
    double mu_q, mu_p, cov, var_q, var_p;
};

Moments moments(std::span<const double> r_q, std::span<const double> r_p) {
    const auto n = static_cast<double>(r_q.size());
    Moments m{};
    m.mu_q = mean(r_q);
    m.mu_p = mean(r_p);
    for (std::size_t i = 0; i < r_q.size(); ++i) {
        const double dq = r_q[i] - m.mu_q;
        const double dp = r_p[i] - m.mu_p;
        m.cov += dq * dp;
        m.var_q += dq * dq;
        m.var_p += dp * dp;
    }
    m.cov /= n - 1.0;
    m.var_q /= n - 1.0;
    m.var_p /= n - 1.0;
    return m;
}

} // namespace

double local_radius_p(const FuzzyGraph& fg, const DataMatrix& data, Index i) {
    double weight_sum = 0.0, weighted = 0.0;
    for (const auto& [j, p] : fg.adj[static_cast<std::size_t>(i)]) {
        weight_sum += p;
        weighted += p * data.squared_distance(i, j);
    }
    if (weight_sum <= 0.0) throw IsolatedPointError("point has no positive fuzzy edge");
    return weighted / weight_sum;
}

double local_radius_q(const Embedding& emb, const FuzzyGraph& fg, const KernelParams& kp,
                      Index i) {
    double weight_sum = 0.0, weighted = 0.0;
    for (const auto& [j, p] : fg.adj[static_cast<std::size_t>(i)]) {
        const double d2 = (emb.coords.row(i) - emb.coords.row(j)).squaredNorm();
        const double qij = q_from_d2(d2, kp);
        weight_sum += qij;
        weighted += qij * d2;
    }
    if (weight_sum <= 0.0) throw IsolatedPointError("point has no positive fuzzy edge");
    return weighted / weight_sum;
}

std::vector<double> log_radii_p(const FuzzyGraph& fg, const DataMatrix& data) {
    std::vector<double> out(static_cast<std::size_t>(fg.n()));
    for (Index i = 0; i < fg.n(); ++i)
        out[static_cast<std::size_t>(i)] =
            std::log(std::max(local_radius_p(fg, data, i), kRadiusFloor));
    return out;
}

std::vector<double> log_radii_q(const Embedding& emb, const FuzzyGraph& fg,
                                const KernelParams& kp) {
    std::vector<double> out(static_cast<std::size_t>(fg.n()));
    for (Index i = 0; i < fg.n(); ++i)
        out[static_cast<std::size_t>(i)] =
            std::log(std::max(local_radius_q(emb, fg, kp, i), kRadiusFloor));
    return out;
}

double correlation(std::span<const double> r_q, std::span<const double> r_p) {
    if (r_q.size() != r_p.size() || r_q.size() < 2)
        throw ParameterError("correlation needs two equal-length vectors of size >= 2");
    const Moments m = moments(r_q, r_p);
    if (m.var_q <= kVarianceFloor || m.var_p <= kVarianceFloor)
        throw DegenerateDensityError("zero variance in log local radii");
    return m.cov / std::sqrt(m.var_q * m.var_p);
}

double densmap_loss(const Embedding& emb, const FuzzyGraph& fg, const DataMatrix& data,
                    const KernelParams& kp, double lambda) {
    double loss = exact_loss(emb, fg, kp);
    if (lambda > 0.0) {
        const auto r_p = log_radii_p(fg, data);
        const auto r_q = log_radii_q(emb, fg, kp);
        loss -= lambda * correlation(r_q, r_p);
    }
    return loss;
}

Eigen::MatrixXd densmap_gradient_all(const Embedding& emb, const FuzzyGraph& fg,
                                     const DataMatrix& data, const KernelParams& kp,
                                     double lambda) {
    const Index n = emb.n();
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, emb.dim());
    if (lambda == 0.0) return grad;

    const auto r_p = log_radii_p(fg, data);
    const auto r_q = log_radii_q(emb, fg, kp);
    const Moments m = moments(r_q, r_p);
    if (m.var_q <= kVarianceFloor || m.var_p <= kVarianceFloor) return grad;

    const double nm1 = static_cast<double>(n) - 1.0;
    const double corr = m.cov / std::sqrt(m.var_q * m.var_p);

    // dCorr/dr_q^i: the mean terms cancel because the centered partner sums
    // to zero.
    std::vector<double> w(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        const auto u = static_cast<std::size_t>(i);
        w[u] = (r_p[u] - m.mu_p) / (nm1 * std::sqrt(m.var_q * m.var_p)) -
               corr * (r_q[u] - m.mu_q) / (nm1 * m.var_q);
    }

    // Per-point normalizers of the radius expectation.
    std::vector<double> s0(static_cast<std::size_t>(n), 0.0), s1(static_cast<std::size_t>(n), 0.0);
    for (Index i = 0; i < n; ++i) {
        for (const auto& [j, p] : fg.adj[static_cast<std::size_t>(i)]) {
            const double d2 = (emb.coords.row(i) - emb.coords.row(j)).squaredNorm();
            const double qij = q_from_d2(d2, kp);
            s0[static_cast<std::size_t>(i)] += qij;
            s1[static_cast<std::size_t>(i)] += qij * d2;
        }
    }

    // dr_q^i / d(d2_ij) through r_q^i = ln(S1_i) - ln(S0_i).
    auto radius_derivative = [&](Index i, double d2, double qij, double dq) {
        const auto u = static_cast<std::size_t>(i);
        if (s1[u] <= kRadiusFloor || s0[u] <= kRadiusFloor) return 0.0;
        return (dq * d2 + qij) / s1[u] - dq / s0[u];
    };

    for (const auto& e : fg.edges()) {
        const Eigen::RowVectorXd delta = emb.coords.row(e.i) - emb.coords.row(e.j);
        const double d2 = delta.squaredNorm();
        const double qij = q_from_d2(d2, kp);
        const double dq = d2 <= 0.0 ? 0.0 : -qij * qij * kp.a * kp.b * pow_sq(d2, kp.b - 1.0);
        const double scalar = w[static_cast<std::size_t>(e.i)] * radius_derivative(e.i, d2, qij, dq) +
                              w[static_cast<std::size_t>(e.j)] * radius_derivative(e.j, d2, qij, dq);
        grad.row(e.i) += -lambda * scalar * 2.0 * delta;
        grad.row(e.j) -= -lambda * scalar * 2.0 * delta;
    }
    return grad;
}

Eigen::RowVectorXd densmap_gradient(const Embedding& emb, const FuzzyGraph& fg,
                                    const DataMatrix& data, const KernelParams& kp,
                                    double lambda, Index i) {
    return densmap_gradient_all(emb, fg, data, kp, lambda).row(i);
}

} // namespace umap
