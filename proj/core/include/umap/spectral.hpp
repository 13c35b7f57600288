#pragma once

#include <cstdint>

#include "umap/fuzzy_graph.hpp"
#include "umap/types.hpp"

namespace umap {

/// Laplacian-eigenmap initialization: eigenvectors of the symmetric
/// normalized Laplacian for the embed_dim smallest nonzero eigenvalues.
/// Disconnected components are embedded separately and spread along the
/// first axis; every column is rescaled to standard deviation 1e-2.
Embedding spectral_embed(const FuzzyGraph& fg, Index embed_dim, std::uint64_t seed);

} // namespace umap
