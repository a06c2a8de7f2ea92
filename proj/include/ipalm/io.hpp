#pragma once

#include <filesystem>
#include <vector>

#include "ipalm/tensor.hpp"

namespace ipalm {

// Comma-separated numbers, one matrix row per line, no header.
RowMatrix read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path, const Eigen::Ref<const RowMatrix>& m);

// Binary 8-bit PGM (P5). Values are returned scaled to [0, 1].
RowMatrix read_pgm(const std::filesystem::path& path);

// Writes an 8-bit P5 image. Values are mapped linearly from [lo, hi] to
// [0, 255] and clamped.
void write_pgm(const std::filesystem::path& path, const Eigen::Ref<const RowMatrix>& img, double lo, double hi);
// [0, 1] -> [0, 255].
void write_pgm(const std::filesystem::path& path, const Eigen::Ref<const RowMatrix>& img);
// Scales by the image maximum so that max maps to 255 (all-zero stays black).
void write_pgm_max_scaled(const std::filesystem::path& path, const Eigen::Ref<const RowMatrix>& img);

// Reads an image from .pgm or .csv depending on the extension.
RowMatrix read_image(const std::filesystem::path& path);

// Loads every .pgm in a directory (sorted by file name), flattens each
// image row-major into one column. All images must share one size.
struct ImageColumns {
    RowMatrix data;
    std::size_t height = 0;
    std::size_t width = 0;
};
ImageColumns load_pgm_directory(const std::filesystem::path& dir);

// Arranges equally sized tiles on a grid, separated by a one-pixel gap
// filled with `gap_value`.
RowMatrix mosaic(const std::vector<RowMatrix>& tiles, std::size_t columns, double gap_value = 0.0);

}  // namespace ipalm
