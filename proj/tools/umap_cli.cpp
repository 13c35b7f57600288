#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "umap/umap.hpp"

namespace {

void print_report_header(const umap::RunConfig& config) {
    if (config.densmap_lambda > 0.0)
        std::cout << "epoch,exact_loss,attractive_updates,repulsive_updates,density_correlation\n";
    else
        std::cout << "epoch,exact_loss,attractive_updates,repulsive_updates\n";
}

void print_report(const umap::EpochReport& r, const umap::RunConfig& config) {
    std::printf("%d,%.17g,%ld,%ld", r.epoch, r.exact_loss, r.attractive_updates,
                r.repulsive_updates);
    if (config.densmap_lambda > 0.0) std::printf(",%.17g", r.density_correlation);
    std::printf("\n");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neighbor-embedding pipeline: fuzzy graph construction, spectral "
                 "initialization, negative-sampling SGD, density regularization, "
                 "streaming and parametric modes"};

    std::string input, output, plot, labels_path, mode_name = "batch", encoder_out;
    umap::RunConfig config;

    app.add_option("--input", input, "Input CSV, one point per row")->required();
    app.add_option("--output", output, "Output embedding CSV")->required();
    app.add_option("--plot", plot, "Optional scatter SVG path (2-D embeddings)");
    app.add_option("--labels", labels_path, "Optional integer labels, one per line");
    app.add_option("--k", config.k, "Neighbor count");
    app.add_option("--a", config.a, "Kernel shape parameter a");
    app.add_option("--b", config.b, "Kernel shape parameter b");
    app.add_option("--neg", config.negative_samples, "Negative samples per firing pair");
    app.add_option("--epochs", config.epochs, "Epoch budget");
    app.add_option("--eps", config.eps, "Repulsion stabilizer");
    app.add_option("--dim", config.embed_dim, "Embedding dimensionality");
    app.add_option("--seed", config.seed, "RNG seed");
    app.add_option("--densmap-lambda", config.densmap_lambda,
                   "Density regularization weight")
        ->expected(0, 1)
        ->default_str("2.0");
    app.add_option("--update-negatives", config.update_negatives,
                   "Also update negative-sample embeddings");
    app.add_option("--effective-weights", config.effective_weights,
                   "Scale repulsion to the expected effective weight (implies "
                   "--update-negatives true)");
    app.add_option("--mode", mode_name, "batch|progressive|parametric")
        ->check(CLI::IsMember({"batch", "progressive", "parametric"}));
    app.add_option("--batch-size", config.stream_batch_size, "Streaming batch size");
    app.add_flag("--stream-update-positives", config.stream_update_positives,
                 "Move positive partners during streaming");
    app.add_option("--hidden", config.hidden, "Encoder hidden width");
    app.add_option("--batch", config.minibatch, "Encoder minibatch size");
    app.add_option("--lr", config.learning_rate, "Encoder learning rate");
    app.add_option("--save-encoder", encoder_out, "Write the trained encoder (parametric mode)");
    app.add_flag("--verbose", config.verbose, "Stream one CSV line per epoch");
    bool no_clip = false;
    app.add_flag("--no-clip", no_clip, "Disable per-update gradient clipping");

    // A bare --densmap-lambda enables the regularizer at its default weight.
    auto* lambda_opt = app.get_option("--densmap-lambda");

    CLI11_PARSE(app, argc, argv);

    if (lambda_opt->count() > 0 && lambda_opt->results().empty()) config.densmap_lambda = 2.0;
    config.clip_gradients = !no_clip;
    if (mode_name == "progressive") config.mode = umap::Mode::Progressive;
    if (mode_name == "parametric") config.mode = umap::Mode::Parametric;

    try {
        const auto data = umap::load_csv(input, false);
        std::optional<std::vector<int>> labels;
        if (!labels_path.empty()) labels = umap::load_labels(labels_path);

        std::function<void(const umap::EpochReport&)> on_epoch;
        if (config.verbose) {
            print_report_header(config);
            on_epoch = [&config](const umap::EpochReport& r) { print_report(r, config); };
        }

        const auto result = umap::run(config, data, labels, on_epoch);
        umap::write_embedding(result.embedding, output);
        if (!plot.empty()) umap::emit_scatter_svg(result.embedding, labels, plot);

        if (config.mode == umap::Mode::Parametric && !encoder_out.empty()) {
            // Deterministic retrain to recover the net; run() returns
            // coordinates only.
            const auto graph = umap::build_knn(data, config.k);
            const auto fuzzy = umap::build_fuzzy(graph, data, config.k);
            umap::ParametricTrainer trainer(data, fuzzy, config);
            for (int e = 0; e < config.epochs; ++e) trainer.train_epoch();
            umap::save_encoder(trainer.net(), encoder_out);
        }

        std::cout << "== quality ==\n";
        std::cout << "knn_preservation: " << result.quality.knn_preservation << "\n";
        if (labels) std::cout << "label_agreement: " << result.quality.label_agreement << "\n";
        if (!std::isnan(result.quality.loss_initial))
            std::cout << "loss_initial: " << result.quality.loss_initial << "\n";
        std::cout << "loss_final: " << result.quality.loss_final << "\n";
    } catch (const umap::PipelineError& e) {
        std::cerr << "error at stage " << e.stage << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
