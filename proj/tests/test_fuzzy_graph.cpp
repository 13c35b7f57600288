#include <doctest.h>

#include <cmath>

#include "umap/fuzzy_graph.hpp"
#include "test_support.hpp"

using namespace umap;
using namespace umap::testing;

namespace {

// Independent dense reference: brute-force kNN, plain bisection to a much
// tighter tolerance than the library's, then naive symmetrization into a
// full n x n matrix.
Eigen::MatrixXd dense_fuzzy_oracle(const DataMatrix& data, int k) {
    const auto g = brute_force_knn(data, k);
    const Index n = data.n();
    const double target = std::log2(static_cast<double>(k));

    std::vector<double> rho(static_cast<std::size_t>(n)), sigma(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        const auto& list = g.neighbors[static_cast<std::size_t>(i)];
        rho[static_cast<std::size_t>(i)] = list.front().distance;
        auto sum_at = [&](double s) {
            double total = 0.0;
            for (const auto& nb : list)
                total += std::exp(-std::max(nb.distance - rho[static_cast<std::size_t>(i)], 0.0) / s);
            return total;
        };
        double lo = 1e-12, hi = 1e12;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (sum_at(mid) < target ? lo : hi) = mid;
        }
        sigma[static_cast<std::size_t>(i)] = 0.5 * (lo + hi);
    }

    Eigen::MatrixXd dir = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (const auto& nb : g.neighbors[static_cast<std::size_t>(i)])
            dir(i, nb.index) = std::min(
                std::exp(-std::max(nb.distance - rho[static_cast<std::size_t>(i)], 0.0) /
                         sigma[static_cast<std::size_t>(i)]),
                1.0);

    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            p(i, j) = dir(i, j) + dir(j, i) - dir(i, j) * dir(j, i);
    return p;
}

} // namespace

TEST_CASE("compute_rho is the minimum neighbor distance") {
    NeighborGraph g;
    g.k = 3;
    g.neighbors = {{{1, 2.0}, {2, 3.0}, {3, 5.0}}};
    CHECK(compute_rho(g, 0) == 2.0);

    g.neighbors = {{{1, 0.0}, {2, 3.0}, {3, 5.0}}};
    CHECK(compute_rho(g, 0) == 0.0);

    const auto data = random_matrix(30, 3, 2);
    const auto full = brute_force_knn(data, 5);
    for (Index i = 0; i < data.n(); ++i)
        CHECK(compute_rho(full, i) == full.neighbors[static_cast<std::size_t>(i)][0].distance);
}

TEST_CASE("sigma calibration solves the closed-form instance") {
    const double dists[] = {1.0, 2.0, 2.0, 2.0};
    const auto r = calibrate_sigma(dists, 1.0, 4, 1e-7, 1e-9, 1e9);
    // 1 + 3 exp(-1/sigma) = 2  =>  sigma = 1/ln 3.
    CHECK(r.sigma == doctest::Approx(1.0 / std::log(3.0)).epsilon(1e-5));
    CHECK(std::abs(r.residual) <= 1e-7);
    CHECK_FALSE(r.saturated);
}

TEST_CASE("sigma calibration saturates when all distances equal rho") {
    const double dists[] = {1.0, 1.0, 1.0, 1.0};
    const auto r = calibrate_sigma(dists, 1.0, 4, 1e-7, 1e-9, 1e9);
    CHECK(r.saturated);
    CHECK(r.sigma == 1e-9);
}

TEST_CASE("directional membership matches the shifted exponential") {
    NeighborGraph g;
    g.k = 2;
    const double rho[] = {1.0, 0.0, 0.0};
    const double sigma[] = {0.5, 1.0, 1.0};
    g.neighbors = {{{1, 1.0}, {2, 1.5}}, {{0, 1.0}, {2, 1.0}}, {{0, 1.5}, {1, 1.0}}};
    CHECK(directional_p(g, rho, sigma, 0, 1) == 1.0);                       // d = rho
    CHECK(directional_p(g, rho, sigma, 0, 2)
          == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));               // d = rho + sigma
    CHECK(directional_p(g, rho, sigma, 0, 0) == 0.0);                       // not a neighbor
}

TEST_CASE("symmetrize is the fuzzy union") {
    CHECK(symmetrize(1.0, 1.0) == 1.0);
    CHECK(symmetrize(0.0, 0.0) == 0.0);
    CHECK(symmetrize(0.5, 0.2) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("mutual nearest neighbors get weight 1") {
    Eigen::MatrixXd m(4, 1);
    m << 0.0, 0.1, 10.0, 10.1;
    DataMatrix data(std::move(m));
    const auto fg = build_fuzzy(build_knn(data, 2), data, 2);
    CHECK(fg.weight(0, 1) == 1.0);
    CHECK(fg.weight(2, 3) == 1.0);
}

TEST_CASE("build matches the dense oracle") {
    for (unsigned seed = 0; seed < 4; ++seed) {
        const auto data = random_matrix(20, 3, seed + 30);
        const int k = 5;
        const auto fg = build_fuzzy(build_knn(data, k), data, k);
        const auto oracle = dense_fuzzy_oracle(data, k);
        for (Index i = 0; i < data.n(); ++i)
            for (Index j = 0; j < data.n(); ++j)
                CHECK(std::abs(fg.weight(i, j) - oracle(i, j)) <= 1e-4);
    }
}

TEST_CASE("stored weights are positive, bounded, and symmetric") {
    const auto data = random_matrix(25, 4, 9);
    const auto fg = build_fuzzy(build_knn(data, 6), data, 6);
    for (const auto& e : fg.edges()) {
        CHECK(e.p > 0.0);
        CHECK(e.p <= 1.0);
        CHECK(fg.weight(e.i, e.j) == fg.weight(e.j, e.i));
    }
    double degree_sum = 0.0;
    for (Index i = 0; i < fg.n(); ++i) degree_sum += fg.degree[static_cast<std::size_t>(i)];
    double edge_sum = 0.0;
    for (const auto& e : fg.edges()) edge_sum += 2.0 * e.p;
    CHECK(degree_sum == doctest::Approx(edge_sum).epsilon(1e-12));
}

TEST_CASE("refresh with no-op point set reproduces the graph bit for bit") {
    const auto data = random_matrix(30, 3, 12);
    const int k = 5;
    const auto graph = build_knn(data, k);
    const auto before = build_fuzzy(graph, data, k);
    auto after = before;
    refresh_fuzzy(after, graph, data, k, {0, 7, 19});
    for (Index i = 0; i < before.n(); ++i) {
        CHECK(before.rho[static_cast<std::size_t>(i)] == after.rho[static_cast<std::size_t>(i)]);
        CHECK(before.sigma[static_cast<std::size_t>(i)] == after.sigma[static_cast<std::size_t>(i)]);
        for (Index j = 0; j < before.n(); ++j)
            CHECK(before.weight(i, j) == after.weight(i, j));
    }
}

TEST_CASE("incremental refresh equals a full rebuild") {
    for (unsigned seed = 0; seed < 4; ++seed) {
        const auto all = random_matrix(40, 3, seed + 70);
        const int k = 5;
        auto prefix = DataMatrix(Eigen::MatrixXd(all.values.topRows(30)));
        const auto batch = DataMatrix(Eigen::MatrixXd(all.values.bottomRows(10)));

        auto graph = build_knn(prefix, k);
        auto fg = build_fuzzy(graph, prefix, k);
        const auto updated = insert_batch(graph, prefix, batch);
        refresh_fuzzy(fg, graph, prefix, k, updated);

        const auto scratch = build_fuzzy(build_knn(all, k), all, k);
        REQUIRE(fg.n() == scratch.n());
        for (Index i = 0; i < fg.n(); ++i) {
            CHECK(fg.sigma[static_cast<std::size_t>(i)] == scratch.sigma[static_cast<std::size_t>(i)]);
            for (Index j = 0; j < fg.n(); ++j)
                CHECK(fg.weight(i, j) == scratch.weight(i, j));
        }
    }
}
