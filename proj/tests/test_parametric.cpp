#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "umap/parametric.hpp"
#include "test_support.hpp"

using namespace umap;
using namespace umap::testing;

namespace {

EncoderNet zero_net(Index d, Index h, Index p) {
    EncoderNet net;
    net.w1 = Eigen::MatrixXd::Zero(h, d);
    net.b1 = Eigen::VectorXd::Zero(h);
    net.w2 = Eigen::MatrixXd::Zero(p, h);
    net.b2 = Eigen::VectorXd::Zero(p);
    return net;
}

} // namespace

TEST_CASE("zero net maps everything to the origin") {
    const auto net = zero_net(4, 3, 2);
    Eigen::RowVectorXd x(4);
    x << 1, -2, 3, -4;
    CHECK(net.forward(x).norm() == 0.0);
}

TEST_CASE("identity-like net passes through the first coordinates") {
    auto net = zero_net(3, 3, 2);
    net.w1 = Eigen::MatrixXd::Identity(3, 3);
    net.w2(0, 0) = 1.0;
    net.w2(1, 1) = 1.0;
    Eigen::RowVectorXd x(3);
    x << 0.5, 2.0, 7.0; // nonnegative so the rectifier is the identity
    const auto y = net.forward(x);
    CHECK(y(0) == 0.5);
    CHECK(y(1) == 2.0);
}

TEST_CASE("forward matches a straight-line oracle") {
    const auto net = init_encoder(5, 7, 2, 3);
    const auto data = random_matrix(10, 5, 4);
    for (Index r = 0; r < 10; ++r) {
        const Eigen::RowVectorXd x = data.values.row(r);
        Eigen::VectorXd h(7);
        for (Index u = 0; u < 7; ++u) {
            double z = net.b1(u);
            for (Index c = 0; c < 5; ++c) z += net.w1(u, c) * x(c);
            h(u) = z > 0.0 ? z : 0.0;
        }
        Eigen::RowVectorXd y(2);
        for (Index o = 0; o < 2; ++o) {
            double z = net.b2(o);
            for (Index u = 0; u < 7; ++u) z += net.w2(o, u) * h(u);
            y(o) = z;
        }
        CHECK((net.forward(x) - y).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("initialization is deterministic and bounded") {
    const auto n1 = init_encoder(6, 10, 2, 9);
    const auto n2 = init_encoder(6, 10, 2, 9);
    CHECK((n1.w1 - n2.w1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((n1.w2 - n2.w2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(n1.b1.norm() == 0.0);
    CHECK(n1.b2.norm() == 0.0);
    CHECK(n1.w1.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / 16.0));
    CHECK(n1.w2.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / 12.0));

    const auto n3 = init_encoder(6, 10, 2, 10);
    CHECK((n1.w1 - n3.w1).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("an edgeless graph produces zero loss and zero gradient") {
    const auto data = random_matrix(6, 4, 5);
    const auto fg = make_fuzzy(6, {});
    const auto net = init_encoder(4, 5, 2, 6);
    std::vector<Index> batch{0, 1, 2, 3, 4, 5};
    const auto g = batch_loss_and_grads(net, data, batch, fg, KernelParams{}, 5, 1, 0, 0);
    CHECK(g.loss == 0.0);
    CHECK(g.w1.norm() == 0.0);
    CHECK(g.b1.norm() == 0.0);
    CHECK(g.w2.norm() == 0.0);
    CHECK(g.b2.norm() == 0.0);
    CHECK(g.attractive_events == 0);
}

TEST_CASE("parameter gradients match finite differences") {
    // eps = 0 so the repulsive update is the exact derivative of its cost;
    // the sampling key is fixed, so the sampled loss is smooth in theta.
    const KernelParams kp{1.929, 0.7915, 0.0};
    const auto data = random_matrix(6, 3, 14);
    const auto fg = build_fuzzy(build_knn(data, 3), data, 3);
    auto net = init_encoder(3, 4, 2, 15);
    std::vector<Index> batch{0, 1, 2, 3, 4, 5};
    const int m = 2;

    const auto analytic =
        batch_loss_and_grads(net, data, batch, fg, kp, m, 7, 0, 0);
    REQUIRE(analytic.attractive_events > 0);

    auto loss_at = [&]() {
        return batch_loss_and_grads(net, data, batch, fg, kp, m, 7, 0, 0).loss;
    };
    // Compare the full concatenated parameter gradient; individual blocks
    // can be legitimately zero (the loss is invariant to the output bias).
    double diff2 = 0.0, ref2 = 0.0;
    auto fd_block = [&](auto& block, const Eigen::MatrixXd& grad) {
        const double h = 1e-5;
        for (Index r = 0; r < block.rows(); ++r) {
            for (Index c = 0; c < block.cols(); ++c) {
                const double orig = block(r, c);
                block(r, c) = orig + h;
                const double fp = loss_at();
                block(r, c) = orig - h;
                const double fm = loss_at();
                block(r, c) = orig;
                const double fd = (fp - fm) / (2.0 * h);
                diff2 += (grad(r, c) - fd) * (grad(r, c) - fd);
                ref2 += fd * fd;
            }
        }
    };

    fd_block(net.w1, analytic.w1);
    fd_block(net.w2, analytic.w2);
    fd_block(net.b1, analytic.b1);
    fd_block(net.b2, analytic.b2);
    CHECK(std::sqrt(diff2) / std::max(std::sqrt(ref2), 1e-12) <= 1e-4);
}

TEST_CASE("training on two clusters reduces the sampled loss") {
    const auto [data, labels] = two_clusters(30, 4, 33);
    RunConfig config;
    config.k = 5;
    config.hidden = 16;
    config.minibatch = 20;
    config.mode = Mode::Parametric;
    const auto fg = build_fuzzy(build_knn(data, config.k), data, config.k);

    ParametricTrainer trainer(data, fg, config);
    const double first = trainer.train_epoch().mean_batch_loss;
    double last = first;
    for (int e = 1; e < 100; ++e) last = trainer.train_epoch().mean_batch_loss;
    CHECK(last < first);
    CHECK(trainer.embed_all().finite());
}

TEST_CASE("encoder serialization round trip") {
    const auto net = init_encoder(5, 9, 2, 77);
    const auto path =
        (std::filesystem::temp_directory_path() / "umap_test_encoder.txt").string();
    save_encoder(net, path);
    const auto back = load_encoder(path);
    CHECK((net.w1 - back.w1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((net.b1 - back.b1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((net.w2 - back.w2).cwiseAbs().maxCoeff() == 0.0);
    CHECK((net.b2 - back.b2).cwiseAbs().maxCoeff() == 0.0);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_encoder("/nonexistent/net.txt"), IoError);
    CHECK_THROWS_AS(save_encoder(net, "/nonexistent/dir/net.txt"), IoError);
}
