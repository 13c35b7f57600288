#pragma once

#include <stdexcept>
#include <string>

namespace umap {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct DatasetTooSmallError : Error { using Error::Error; };
struct IsolatedPointError : Error { using Error::Error; };
struct DegenerateDensityError : Error { using Error::Error; };
struct NumericalDivergenceError : Error { using Error::Error; };

// Errors surfaced by the pipeline carry the stage that raised them.
struct PipelineError : Error {
    std::string stage;
    PipelineError(std::string stage_, const std::string& what_)
        : Error("[" + stage_ + "] " + what_), stage(std::move(stage_)) {}
};

} // namespace umap
