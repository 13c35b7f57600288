#include "umap/parametric.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "umap/rng.hpp"

namespace umap {

Eigen::RowVectorXd EncoderNet::forward(const Eigen::RowVectorXd& x) const {
    if (x.size() != in_dim()) throw ParameterError("input dimensionality mismatch");
    Eigen::VectorXd z1 = w1 * x.transpose() + b1;
    Eigen::VectorXd h1 = z1.cwiseMax(0.0);
    return (w2 * h1 + b2).transpose();
}

Embedding EncoderNet::forward_all(const DataMatrix& data) const {
    Embedding emb(data.n(), out_dim());
    for (Index i = 0; i < data.n(); ++i) emb.coords.row(i) = forward(data.values.row(i));
    return emb;
}

EncoderNet init_encoder(Index in_dim, Index hidden, Index out_dim, std::uint64_t seed) {
    EncoderNet net;
    net.w1.resize(hidden, in_dim);
    net.b1 = Eigen::VectorXd::Zero(hidden);
    net.w2.resize(out_dim, hidden);
    net.b2 = Eigen::VectorXd::Zero(out_dim);

    CounterRng rng(seed, 0xE2C0DEull);
    auto glorot_fill = [&rng](Eigen::MatrixXd& w, Index fan_in, Index fan_out) {
        const double lim = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (Index r = 0; r < w.rows(); ++r)
            for (Index c = 0; c < w.cols(); ++c) w(r, c) = lim * (2.0 * rng.uniform01() - 1.0);
    };
    glorot_fill(net.w1, in_dim, hidden);
    glorot_fill(net.w2, hidden, out_dim);
    return net;
}

EncoderGrads batch_loss_and_grads(const EncoderNet& net, const DataMatrix& data,
                                  std::span<const Index> batch, const FuzzyGraph& fg,
                                  const KernelParams& kp, int m, std::uint64_t seed,
                                  int epoch, int batch_index) {
    const Index b = static_cast<Index>(batch.size());
    const Index h = net.hidden_dim();
    const Index p = net.out_dim();

    // Forward pass with caches for backprop.
    Eigen::MatrixXd z1(b, h), h1(b, h), y(b, p);
    for (Index r = 0; r < b; ++r) {
        const Eigen::RowVectorXd x = data.values.row(batch[static_cast<std::size_t>(r)]);
        z1.row(r) = (net.w1 * x.transpose() + net.b1).transpose();
        h1.row(r) = z1.row(r).cwiseMax(0.0);
        y.row(r) = (net.w2 * h1.row(r).transpose() + net.b2).transpose();
    }

    EncoderGrads g;
    g.w1 = Eigen::MatrixXd::Zero(h, net.in_dim());
    g.b1 = Eigen::VectorXd::Zero(h);
    g.w2 = Eigen::MatrixXd::Zero(p, h);
    g.b2 = Eigen::VectorXd::Zero(p);

    Eigen::MatrixXd dy = Eigen::MatrixXd::Zero(b, p);
    const std::uint64_t cell_key =
        (static_cast<std::uint64_t>(epoch) << 32) | static_cast<std::uint64_t>(batch_index);

    // Pairs are gated by the global p_ij of the batch points' identities;
    // negatives come from within the batch.
    for (Index i = 0; i < b; ++i) {
        for (Index j = 0; j < b; ++j) {
            const double pij = fg.weight(batch[static_cast<std::size_t>(i)],
                                         batch[static_cast<std::size_t>(j)]);
            CounterRng rng(seed, cell_key, static_cast<std::uint64_t>(i),
                           static_cast<std::uint64_t>(j));
            if (rng.uniform01() > pij) continue;

            const Eigen::RowVectorXd delta = y.row(i) - y.row(j);
            const double d2 = delta.squaredNorm();
            g.loss += cost_attractive_d2(d2, kp);
            const Eigen::RowVectorXd ga = attractive_coeff(d2, kp) * delta;
            dy.row(i) += ga;
            dy.row(j) -= ga;
            ++g.attractive_events;

            for (int t = 0; t < m; ++t) {
                const Index l = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(b)));
                const Eigen::RowVectorXd rdelta = y.row(i) - y.row(l);
                const double rd2 = rdelta.squaredNorm();
                g.loss += cost_repulsive_d2(rd2, kp);
                const Eigen::RowVectorXd gr = repulsive_coeff(rd2, kp) * rdelta;
                dy.row(i) += gr;
                dy.row(l) -= gr;
                ++g.repulsive_events;
            }
        }
    }

    // Manual backprop through the two layers.
    for (Index r = 0; r < b; ++r) {
        const Eigen::VectorXd dout = dy.row(r).transpose();
        g.w2 += dout * h1.row(r);
        g.b2 += dout;
        Eigen::VectorXd dh = net.w2.transpose() * dout;
        for (Index u = 0; u < h; ++u)
            if (z1(r, u) <= 0.0) dh(u) = 0.0;
        g.w1 += dh * data.values.row(batch[static_cast<std::size_t>(r)]);
        g.b1 += dh;
    }
    return g;
}

ParametricTrainer::ParametricTrainer(const DataMatrix& data, const FuzzyGraph& fg,
                                     const RunConfig& config)
    : data_(data), fg_(fg), config_(config), kp_{config.a, config.b, config.eps} {
    config_.validate();
    if (static_cast<Index>(config_.minibatch) > data_.n())
        throw ParameterError("minibatch size exceeds dataset size");
    net_ = init_encoder(data_.dim(), config_.hidden, config_.embed_dim, config_.seed);
    velocity_.w1 = Eigen::MatrixXd::Zero(net_.w1.rows(), net_.w1.cols());
    velocity_.b1 = Eigen::VectorXd::Zero(net_.b1.size());
    velocity_.w2 = Eigen::MatrixXd::Zero(net_.w2.rows(), net_.w2.cols());
    velocity_.b2 = Eigen::VectorXd::Zero(net_.b2.size());
}

ParametricReport ParametricTrainer::train_epoch() {
    const Index b = config_.minibatch;
    const Index num_batches = data_.n() / b;
    ParametricReport report;
    report.epoch = epoch_;

    for (Index s = 0; s < num_batches; ++s) {
        std::vector<Index> batch(static_cast<std::size_t>(b));
        for (Index r = 0; r < b; ++r) batch[static_cast<std::size_t>(r)] = s * b + r;

        const auto g = batch_loss_and_grads(net_, data_, batch, fg_, kp_,
                                            config_.negative_samples, config_.seed, epoch_,
                                            static_cast<int>(s));
        velocity_.w1 = config_.momentum * velocity_.w1 + g.w1;
        velocity_.b1 = config_.momentum * velocity_.b1 + g.b1;
        velocity_.w2 = config_.momentum * velocity_.w2 + g.w2;
        velocity_.b2 = config_.momentum * velocity_.b2 + g.b2;
        net_.w1 -= config_.learning_rate * velocity_.w1;
        net_.b1 -= config_.learning_rate * velocity_.b1;
        net_.w2 -= config_.learning_rate * velocity_.w2;
        net_.b2 -= config_.learning_rate * velocity_.b2;

        report.mean_batch_loss += g.loss;
        report.attractive_events += g.attractive_events;
        report.repulsive_events += g.repulsive_events;
    }
    if (num_batches > 0) report.mean_batch_loss /= static_cast<double>(num_batches);

    if (!net_.w1.allFinite() || !net_.b1.allFinite() || !net_.w2.allFinite() ||
        !net_.b2.allFinite())
        throw NumericalDivergenceError("non-finite encoder parameter at epoch " +
                                       std::to_string(epoch_));
    ++epoch_;
    return report;
}

namespace {

void write_matrix(std::ofstream& out, const Eigen::MatrixXd& m) {
    char buf[64];
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
            out << buf << (c + 1 < m.cols() ? ' ' : '\n');
        }
    }
}

Eigen::MatrixXd read_matrix(std::ifstream& in, Index rows, Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c)
            if (!(in >> m(r, c))) throw ParseError("truncated encoder file");
    return m;
}

} // namespace

void save_encoder(const EncoderNet& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << "umap-encoder 1\n"
        << net.in_dim() << ' ' << net.hidden_dim() << ' ' << net.out_dim() << '\n';
    write_matrix(out, net.w1);
    write_matrix(out, net.b1.transpose());
    write_matrix(out, net.w2);
    write_matrix(out, net.b2.transpose());
    if (!out) throw IoError("write failed: " + path);
}

EncoderNet load_encoder(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open encoder file: " + path);
    std::string magic, version;
    in >> magic >> version;
    if (magic != "umap-encoder" || version != "1")
        throw ParseError("unrecognized encoder file format");
    Index d = 0, h = 0, p = 0;
    if (!(in >> d >> h >> p) || d < 1 || h < 1 || p < 1)
        throw ParseError("invalid encoder dimensions");
    EncoderNet net;
    net.w1 = read_matrix(in, h, d);
    net.b1 = read_matrix(in, 1, h).transpose();
    net.w2 = read_matrix(in, p, h);
    net.b2 = read_matrix(in, 1, p).transpose();
    return net;
}

} // namespace umap
