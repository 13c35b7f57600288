#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "umap/metrics.hpp"
#include "umap/optimizer.hpp"
#include "umap/types.hpp"

namespace umap {

struct RunResult {
    Embedding embedding;
    std::vector<EpochReport> reports;
    QualityReport quality;
    RunConfig config_echo;
};

/// Full pipeline for the configured mode. Deterministic per seed; stage
/// failures are rethrown as PipelineError with the stage name.
RunResult run(const RunConfig& config, const DataMatrix& data,
              const std::optional<std::vector<int>>& labels = std::nullopt,
              const std::function<void(const EpochReport&)>& on_epoch = nullptr);

} // namespace umap
