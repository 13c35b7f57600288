#pragma once

#include "umap/dataio.hpp"
#include "umap/densmap.hpp"
#include "umap/fuzzy_graph.hpp"
#include "umap/kernel.hpp"
#include "umap/knn_graph.hpp"
#include "umap/metrics.hpp"
#include "umap/optimizer.hpp"
#include "umap/parametric.hpp"
#include "umap/pipeline.hpp"
#include "umap/progressive.hpp"
#include "umap/spectral.hpp"
#include "umap/types.hpp"
