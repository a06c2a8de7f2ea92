#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "ipalm/tensor.hpp"

namespace ipalm {

// A = B* C* with B* >= 0 holding exactly s nonzeros per column and C* >= 0.
struct NmfInstance {
    RowMatrix a;
    RowMatrix b_true;
    RowMatrix c_true;
    std::size_t sparsity = 0;
};

NmfInstance synth_nmf(std::size_t rows = 20, std::size_t cols = 30, std::size_t rank = 3, std::size_t sparsity = 2,
                      std::uint64_t seed = 1);

// Binary tile image (tiles of size/8 pixels) blurred by a known sparse
// motion-path kernel on the simplex, without noise. The seed picks the
// tiles; the kernel is fixed for a given kernel_size.
struct BidInstance {
    RowMatrix sharp;
    RowMatrix kernel;
    RowMatrix blurred;
};

BidInstance synth_bid(std::size_t size = 64, std::size_t kernel_size = 7, std::uint64_t seed = 1);

// Rectangles over a smooth oriented texture, scaled to [0, 1].
RowMatrix synth_texture_image(std::size_t size = 32, std::uint64_t seed = 1);

// Writes all desk instances (CSV matrices and PGM previews) into dir.
void write_synthetic_instances(const std::filesystem::path& dir, std::uint64_t seed);

}  // namespace ipalm
