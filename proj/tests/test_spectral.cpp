#include <doctest.h>

#include <cmath>

#include "umap/spectral.hpp"
#include "test_support.hpp"

using namespace umap;
using namespace umap::testing;

namespace {

double column_std(const Eigen::VectorXd& c) {
    const Eigen::VectorXd centered = c.array() - c.mean();
    return std::sqrt(centered.squaredNorm() / static_cast<double>(c.size()));
}

Eigen::MatrixXd normalized_laplacian(const FuzzyGraph& fg) {
    const Index n = fg.n();
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) p(i, j) = fg.weight(i, j);
    Eigen::VectorXd dinv_sqrt(n);
    for (Index i = 0; i < n; ++i) dinv_sqrt(i) = 1.0 / std::sqrt(p.row(i).sum());
    return Eigen::MatrixXd::Identity(n, n) -
           dinv_sqrt.asDiagonal() * p * dinv_sqrt.asDiagonal();
}

} // namespace

TEST_CASE("path graph on 3 nodes uses the middle eigenvector") {
    const auto fg = make_fuzzy(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    const auto emb = spectral_embed(fg, 1, 42);
    // Normalized-Laplacian spectrum {0, 1, 2}; eigenvalue 1 has eigenvector
    // (1, 0, -1), scaled so the column std is 1e-2 and the dominant entry
    // is positive.
    const double c = 0.01 * std::sqrt(1.5);
    CHECK(emb.coords(0, 0) == doctest::Approx(c).epsilon(1e-9));
    CHECK(std::abs(emb.coords(1, 0)) <= 1e-9);
    CHECK(emb.coords(2, 0) == doctest::Approx(-c).epsilon(1e-9));
}

TEST_CASE("two disconnected cliques separate along the first axis") {
    std::vector<FuzzyGraph::Edge> edges;
    for (Index c = 0; c < 2; ++c)
        for (Index i = 0; i < 5; ++i)
            for (Index j = i + 1; j < 5; ++j) edges.push_back({5 * c + i, 5 * c + j, 1.0});
    const auto emb = spectral_embed(make_fuzzy(10, edges), 2, 42);

    const double max_a = emb.coords.col(0).head(5).maxCoeff();
    const double min_b = emb.coords.col(0).tail(5).minCoeff();
    CHECK((max_a < min_b || emb.coords.col(0).tail(5).maxCoeff() < emb.coords.col(0).head(5).minCoeff()));
}

TEST_CASE("every column has standard deviation 1e-2") {
    const auto data = random_matrix(30, 4, 8);
    const auto fg = build_fuzzy(build_knn(data, 6), data, 6);
    const auto emb = spectral_embed(fg, 3, 42);
    for (Index c = 0; c < 3; ++c)
        CHECK(column_std(emb.coords.col(c)) == doctest::Approx(1e-2).epsilon(1e-9));

    // Also on a disconnected graph, where components are offset before the
    // final rescale.
    std::vector<FuzzyGraph::Edge> edges;
    for (Index comp = 0; comp < 2; ++comp)
        for (Index i = 0; i < 4; ++i)
            for (Index j = i + 1; j < 4; ++j) edges.push_back({4 * comp + i, 4 * comp + j, 0.8});
    const auto emb2 = spectral_embed(make_fuzzy(8, edges), 2, 42);
    for (Index c = 0; c < 2; ++c)
        CHECK(column_std(emb2.coords.col(c)) == doctest::Approx(1e-2).epsilon(1e-9));
}

TEST_CASE("columns are eigenvectors of the normalized Laplacian") {
    const auto data = random_matrix(25, 3, 13);
    const auto fg = build_fuzzy(build_knn(data, 6), data, 6);
    const auto laplacian = normalized_laplacian(fg);
    const auto emb = spectral_embed(fg, 2, 42);

    for (Index c = 0; c < 2; ++c) {
        const Eigen::VectorXd v = emb.coords.col(c);
        const double lambda = v.dot(laplacian * v) / v.squaredNorm();
        CHECK(lambda > 1e-8);
        CHECK((laplacian * v - lambda * v).norm() <= 1e-8 * v.norm());
    }
}

TEST_CASE("determinism and error paths") {
    const auto data = random_matrix(15, 3, 21);
    const auto fg = build_fuzzy(build_knn(data, 4), data, 4);
    const auto e1 = spectral_embed(fg, 2, 7);
    const auto e2 = spectral_embed(fg, 2, 7);
    CHECK((e1.coords - e2.coords).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(spectral_embed(fg, 15, 7), ParameterError);
    CHECK_THROWS_AS(spectral_embed(make_fuzzy(3, {{0, 1, 0.5}}), 1, 7), IsolatedPointError);
}
