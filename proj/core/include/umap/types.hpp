#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "umap/error.hpp"

namespace umap {

using Index = Eigen::Index;

/// Dense training data, one row per point.
struct DataMatrix {
    Eigen::MatrixXd values; // n x d

    DataMatrix() = default;
    explicit DataMatrix(Eigen::MatrixXd v) : values(std::move(v)) {}

    Index n() const { return values.rows(); }
    Index dim() const { return values.cols(); }

    double squared_distance(Index i, Index j) const {
        return (values.row(i) - values.row(j)).squaredNorm();
    }
    double distance(Index i, Index j) const { return std::sqrt(squared_distance(i, j)); }
};

/// Low-dimensional coordinates, one row per point; mutated in place by the optimizer.
struct Embedding {
    Eigen::MatrixXd coords; // n x p

    Embedding() = default;
    explicit Embedding(Eigen::MatrixXd c) : coords(std::move(c)) {}
    Embedding(Index n, Index p) : coords(Eigen::MatrixXd::Zero(n, p)) {}

    Index n() const { return coords.rows(); }
    Index dim() const { return coords.cols(); }
    bool finite() const { return coords.allFinite(); }
};

enum class Mode { Batch, Progressive, Parametric };

/// All run hyperparameters. Defaults follow the standard UMAP settings.
struct RunConfig {
    int k = 15;
    double a = 1.929;
    double b = 0.7915;
    int negative_samples = 5;   // m
    double eps = 0.001;         // repulsion stabilizer
    int epochs = 200;           // nu_max
    double densmap_lambda = 0.0;
    std::uint64_t seed = 42;
    bool update_negatives = false;
    bool effective_weights = false;
    int embed_dim = 2;          // p

    bool clip_gradients = true; // per-update l2 clip, guard against the repulsive blow-up
    double clip_norm = 4.0;

    Mode mode = Mode::Batch;
    bool verbose = false;

    // Progressive mode.
    int stream_batch_size = 100;
    int stream_epochs = 50;
    double stream_eta = 0.3;
    bool stream_update_positives = false;
    double stream_noise_std = 0.01;

    // Parametric mode.
    int hidden = 100;
    int minibatch = 64;
    double learning_rate = 1e-3;
    double momentum = 0.9;

    void validate() const {
        if (k < 2) throw ParameterError("k must be >= 2");
        if (a <= 0.0 || b <= 0.0) throw ParameterError("kernel parameters a, b must be positive");
        if (negative_samples < 0) throw ParameterError("negative sample count must be >= 0");
        if (eps <= 0.0) throw ParameterError("eps must be positive");
        if (epochs < 1) throw ParameterError("epochs must be >= 1");
        if (densmap_lambda < 0.0) throw ParameterError("densmap lambda must be >= 0");
        if (embed_dim < 1) throw ParameterError("embedding dimension must be >= 1");
        if (effective_weights && !update_negatives)
            throw ParameterError("effective-weights mode requires update-negatives");
        if (stream_batch_size < 1) throw ParameterError("stream batch size must be >= 1");
        if (hidden < 1) throw ParameterError("hidden width must be >= 1");
        if (minibatch < 1) throw ParameterError("minibatch size must be >= 1");
        if (learning_rate <= 0.0) throw ParameterError("learning rate must be positive");
        if (momentum < 0.0 || momentum >= 1.0) throw ParameterError("momentum must be in [0, 1)");
    }
};

} // namespace umap
