#include "umap/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "umap/fuzzy_graph.hpp"
#include "umap/knn_graph.hpp"
#include "umap/parametric.hpp"
#include "umap/progressive.hpp"
#include "umap/spectral.hpp"

namespace umap {

namespace {

template <class F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(name, e.what());
    }
}

RunResult run_batch(const RunConfig& config, const DataMatrix& data,
                    const std::function<void(const EpochReport&)>& on_epoch) {
    RunResult result;
    result.config_echo = config;
    const KernelParams kp{config.a, config.b, config.eps};

    const auto graph = stage("knn_graph", [&] { return build_knn(data, config.k); });
    const auto fuzzy = stage("fuzzy_graph", [&] { return build_fuzzy(graph, data, config.k); });
    result.embedding =
        stage("spectral_init", [&] { return spectral_embed(fuzzy, config.embed_dim, config.seed); });

    result.quality.loss_initial =
        stage("sgd_optimizer", [&] { return exact_loss(result.embedding, fuzzy, kp); });
    stage("sgd_optimizer", [&] {
        SgdOptimizer opt(result.embedding, fuzzy, config, &data);
        for (int e = 0; e < config.epochs; ++e) {
            result.reports.push_back(opt.run_epoch());
            if (on_epoch) on_epoch(result.reports.back());
        }
        return 0;
    });
    result.quality.loss_final = result.reports.back().exact_loss;
    return result;
}

RunResult run_progressive(const RunConfig& config, const DataMatrix& data) {
    RunResult result;
    result.config_echo = config;

    StreamState state;
    stage("progressive", [&] {
        Index offset = 0;
        while (offset < data.n()) {
            const Index take = std::min<Index>(config.stream_batch_size, data.n() - offset);
            DataMatrix batch(Eigen::MatrixXd(data.values.middleRows(offset, take)));
            ingest_batch(state, batch, config);
            offset += take;
            if (config.verbose) {
                // Cumulative embedding after each ingested batch.
                std::printf("# batch %d: %lld points\n", state.batch_counter,
                            static_cast<long long>(state.embedding.n()));
                for (Index i = 0; i < state.embedding.n(); ++i) {
                    for (Index c = 0; c < state.embedding.dim(); ++c)
                        std::printf("%.17g%c", state.embedding.coords(i, c),
                                    c + 1 < state.embedding.dim() ? ',' : '\n');
                }
            }
        }
        return 0;
    });
    result.embedding = state.embedding;
    result.quality.loss_initial = std::numeric_limits<double>::quiet_NaN();
    result.quality.loss_final = stage("progressive", [&] {
        return exact_loss(state.embedding, state.fuzzy, KernelParams{config.a, config.b, config.eps});
    });
    return result;
}

RunResult run_parametric(const RunConfig& config, const DataMatrix& data,
                         const std::function<void(const EpochReport&)>& on_epoch) {
    RunResult result;
    result.config_echo = config;
    const KernelParams kp{config.a, config.b, config.eps};

    const auto graph = stage("knn_graph", [&] { return build_knn(data, config.k); });
    const auto fuzzy = stage("fuzzy_graph", [&] { return build_fuzzy(graph, data, config.k); });

    stage("parametric", [&] {
        ParametricTrainer trainer(data, fuzzy, config);
        result.quality.loss_initial = exact_loss(trainer.embed_all(), fuzzy, kp);
        for (int e = 0; e < config.epochs; ++e) {
            const auto rep = trainer.train_epoch();
            EpochReport report;
            report.epoch = rep.epoch;
            report.attractive_updates = rep.attractive_events;
            report.repulsive_updates = rep.repulsive_events;
            report.exact_loss = exact_loss(trainer.embed_all(), fuzzy, kp);
            result.reports.push_back(report);
            if (on_epoch) on_epoch(report);
        }
        result.embedding = trainer.embed_all();
        return 0;
    });
    result.quality.loss_final = result.reports.back().exact_loss;
    return result;
}

} // namespace

RunResult run(const RunConfig& config, const DataMatrix& data,
              const std::optional<std::vector<int>>& labels,
              const std::function<void(const EpochReport&)>& on_epoch) {
    stage("config", [&] {
        config.validate();
        if (data.n() < 2) throw DatasetTooSmallError("need at least 2 points");
        if (!data.values.allFinite()) throw ParameterError("data contains non-finite values");
        if (labels && static_cast<Index>(labels->size()) != data.n())
            throw ParameterError("label count does not match point count");
        return 0;
    });

    RunResult result;
    switch (config.mode) {
        case Mode::Batch: result = run_batch(config, data, on_epoch); break;
        case Mode::Progressive: result = run_progressive(config, data); break;
        case Mode::Parametric: result = run_parametric(config, data, on_epoch); break;
    }

    stage("metrics", [&] {
        const int k = std::min<int>(config.k, static_cast<int>(data.n()) - 1);
        result.quality.knn_preservation = knn_preservation(data, result.embedding, k);
        if (labels) result.quality.label_agreement = label_agreement(result.embedding, *labels, k);
        return 0;
    });
    return result;
}

} // namespace umap
