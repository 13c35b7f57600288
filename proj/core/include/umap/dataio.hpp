#pragma once

#include <optional>
#include <string>
#include <vector>

#include "umap/types.hpp"

namespace umap {

DataMatrix load_csv(const std::string& path, bool has_header = false);

/// One integer label per line.
std::vector<int> load_labels(const std::string& path);

/// Full-precision CSV, round-trippable through load_csv.
void write_embedding(const Embedding& emb, const std::string& path);

/// 2-D scatter plot; circles colored by label when labels are given.
void emit_scatter_svg(const Embedding& emb,
                      const std::optional<std::vector<int>>& labels,
                      const std::string& path);

} // namespace umap
