#include "umap/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace umap {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end != begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value))
        throw ParseError("non-numeric cell '" + cell + "' at line " + std::to_string(line_no));
    return value;
}

} // namespace

DataMatrix load_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t cols = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (has_header && line_no == 1) continue;
        if (line.empty() || line == "\r") continue;
        auto cells = split_line(line);
        if (cols == 0) cols = cells.size();
        if (cells.size() != cols)
            throw ParseError("ragged row at line " + std::to_string(line_no) + ": expected " +
                             std::to_string(cols) + " columns, got " + std::to_string(cells.size()));
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) row[c] = parse_cell(cells[c], line_no);
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw DatasetTooSmallError("dataset has fewer than 2 points: " + path);

    Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols; ++c) m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    return DataMatrix(std::move(m));
}

std::vector<int> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open labels file: " + path);
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        labels.push_back(static_cast<int>(std::lround(parse_cell(line, line_no))));
    }
    return labels;
}

void write_embedding(const Embedding& emb, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open file for writing: " + path);
    char buf[64];
    for (Index i = 0; i < emb.n(); ++i) {
        for (Index j = 0; j < emb.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", emb.coords(i, j));
            out << buf;
            if (j + 1 < emb.dim()) out << ',';
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

void emit_scatter_svg(const Embedding& emb,
                      const std::optional<std::vector<int>>& labels,
                      const std::string& path) {
    if (emb.dim() != 2) throw DimensionError("scatter plot requires a 2-D embedding");

    // Fixed palette, cycled by label.
    static const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                     "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    constexpr int kPaletteSize = 8;

    double xmin = emb.coords.col(0).minCoeff(), xmax = emb.coords.col(0).maxCoeff();
    double ymin = emb.coords.col(1).minCoeff(), ymax = emb.coords.col(1).maxCoeff();
    // Degenerate bounding box falls back to a unit box around the data.
    if (xmax - xmin <= 0.0) { xmin -= 0.5; xmax += 0.5; }
    if (ymax - ymin <= 0.0) { ymin -= 0.5; ymax += 0.5; }
    const double mx = 0.05 * (xmax - xmin), my = 0.05 * (ymax - ymin);
    xmin -= mx; xmax += mx; ymin -= my; ymax += my;

    constexpr double W = 640.0, H = 640.0;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    for (Index i = 0; i < emb.n(); ++i) {
        const double px = (emb.coords(i, 0) - xmin) / (xmax - xmin) * W;
        const double py = H - (emb.coords(i, 1) - ymin) / (ymax - ymin) * H;
        const char* color = "#1f77b4";
        if (labels && i < static_cast<Index>(labels->size())) {
            int lab = (*labels)[static_cast<std::size_t>(i)];
            color = kPalette[((lab % kPaletteSize) + kPaletteSize) % kPaletteSize];
        }
        out << "  <circle cx=\"" << px << "\" cy=\"" << py << "\" r=\"3\" fill=\"" << color
            << "\" fill-opacity=\"0.7\"/>\n";
    }
    out << "</svg>\n";
    if (!out) throw IoError("write failed: " + path);
}

} // namespace umap
