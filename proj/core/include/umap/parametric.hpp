#pragma once

#include <span>
#include <string>
#include <vector>

#include "umap/fuzzy_graph.hpp"
#include "umap/kernel.hpp"
#include "umap/types.hpp"

namespace umap {

/// Two-layer feed-forward encoder: d -> h (rectifier) -> p (identity).
struct EncoderNet {
    Eigen::MatrixXd w1; // h x d
    Eigen::VectorXd b1; // h
    Eigen::MatrixXd w2; // p x h
    Eigen::VectorXd b2; // p

    Index in_dim() const { return w1.cols(); }
    Index hidden_dim() const { return w1.rows(); }
    Index out_dim() const { return w2.rows(); }

    Eigen::RowVectorXd forward(const Eigen::RowVectorXd& x) const;
    Embedding forward_all(const DataMatrix& data) const;
};

/// Glorot-uniform weight initialization, deterministic per seed.
EncoderNet init_encoder(Index in_dim, Index hidden, Index out_dim, std::uint64_t seed);

struct EncoderGrads {
    Eigen::MatrixXd w1;
    Eigen::VectorXd b1;
    Eigen::MatrixXd w2;
    Eigen::VectorXd b2;
    double loss = 0.0;
    long attractive_events = 0;
    long repulsive_events = 0;
};

/// Sampled batch loss (attractive + repulsive sums over the in-batch pair
/// loop) and its full parameter gradient by manual backpropagation. The
/// sampling draws depend only on (seed, epoch, batch index), never on the
/// parameters, so the loss is differentiable in theta for a fixed key.
EncoderGrads batch_loss_and_grads(const EncoderNet& net, const DataMatrix& data,
                                  std::span<const Index> batch, const FuzzyGraph& fg,
                                  const KernelParams& kp, int m, std::uint64_t seed,
                                  int epoch, int batch_index);

struct ParametricReport {
    int epoch = 0;
    double mean_batch_loss = 0.0;
    long attractive_events = 0;
    long repulsive_events = 0;
};

/// Mini-batch gradient-descent trainer with momentum over the encoder
/// parameters; batches are contiguous slices of the dataset.
class ParametricTrainer {
public:
    ParametricTrainer(const DataMatrix& data, const FuzzyGraph& fg, const RunConfig& config);

    ParametricReport train_epoch();
    const EncoderNet& net() const { return net_; }
    Embedding embed_all() const { return net_.forward_all(data_); }

private:
    const DataMatrix& data_;
    const FuzzyGraph& fg_;
    RunConfig config_;
    KernelParams kp_;
    EncoderNet net_;
    EncoderGrads velocity_;
    int epoch_ = 0;
};

/// Versioned flat text format: header + layer dims + row-major weights.
void save_encoder(const EncoderNet& net, const std::string& path);
EncoderNet load_encoder(const std::string& path);

} // namespace umap
