#include "ipalm/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "ipalm/errors.hpp"
#include "ipalm/image_ops.hpp"
#include "ipalm/io.hpp"

namespace ipalm {

NmfInstance synth_nmf(std::size_t rows, std::size_t cols, std::size_t rank, std::size_t sparsity,
                      std::uint64_t seed) {
    if (rows == 0 || cols == 0 || rank == 0) throw ParameterError("synth_nmf: dimensions must be positive");
    if (sparsity == 0 || sparsity > rows) throw ParameterError("synth_nmf: need 1 <= s <= rows");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> big(0.5, 1.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const auto m = static_cast<Eigen::Index>(rows);
    const auto n = static_cast<Eigen::Index>(cols);
    const auto r = static_cast<Eigen::Index>(rank);
    NmfInstance inst;
    inst.sparsity = sparsity;
    inst.b_true = RowMatrix::Zero(m, r);
    std::vector<std::size_t> idx(rows);
    for (Eigen::Index j = 0; j < r; ++j) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t q = 0; q < sparsity; ++q) inst.b_true(static_cast<Eigen::Index>(idx[q]), j) = big(rng);
    }
    inst.c_true.resize(r, n);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) inst.c_true(i, j) = unit(rng);
    }
    inst.a = inst.b_true * inst.c_true;
    return inst;
}

BidInstance synth_bid(std::size_t size, std::size_t kernel_size, std::uint64_t seed) {
    if (kernel_size % 2 == 0 || kernel_size < 3 || kernel_size > size) {
        throw ParameterError("synth_bid: kernel must be odd, at least 3 and fit in the image");
    }
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    const auto n = static_cast<Eigen::Index>(size);

    // Binary tiles: sharp 0/1 edges, every value on the box boundary.
    BidInstance inst;
    inst.sharp.resize(n, n);
    const Eigen::Index tile = std::max<Eigen::Index>(2, n / 8);
    for (Eigen::Index i = 0; i < n; i += tile) {
        for (Eigen::Index j = 0; j < n; j += tile) {
            inst.sharp.block(i, j, std::min(tile, n - i), std::min(tile, n - j)).setConstant(coin(rng) ? 1.0 : 0.0);
        }
    }

    // Camera-shake path through anchors given on a 7x7 grid and scaled to the
    // window. It touches all four window edges, so no shifted copy of the
    // kernel fits the same window.
    struct Anchor {
        int row, col;
        double weight;
    };
    static constexpr Anchor path[] = {{0, 2, 1}, {1, 1, 1}, {2, 0, 2}, {2, 1, 1}, {3, 1, 2}, {3, 2, 3},
                                      {4, 3, 3}, {4, 4, 2}, {5, 5, 2}, {6, 6, 1}, {5, 6, 1}};
    const auto l = static_cast<Eigen::Index>(kernel_size);
    const double scale = static_cast<double>(l - 1) / 6.0;
    inst.kernel = RowMatrix::Zero(l, l);
    for (const Anchor& a : path) {
        inst.kernel(std::lround(a.row * scale), std::lround(a.col * scale)) += a.weight;
    }
    inst.kernel /= inst.kernel.sum();
    inst.blurred = circ_conv(inst.sharp, inst.kernel);
    return inst;
}

RowMatrix synth_texture_image(std::size_t size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(size);
    RowMatrix img(n, n);
    const double f1 = 0.3 + 0.4 * unit(rng);
    const double f2 = 0.2 + 0.3 * unit(rng);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            img(i, j) = 0.5 + 0.25 * std::sin(f1 * static_cast<double>(i) + f2 * static_cast<double>(j)) +
                        0.1 * std::cos(0.15 * static_cast<double>(i * j) / static_cast<double>(n));
        }
    }
    for (int q = 0; q < 4; ++q) {
        const auto r0 = static_cast<Eigen::Index>(unit(rng) * static_cast<double>(n) * 0.7);
        const auto c0 = static_cast<Eigen::Index>(unit(rng) * static_cast<double>(n) * 0.7);
        const auto h = std::min<Eigen::Index>(n - r0, 3 + static_cast<Eigen::Index>(unit(rng) * 10));
        const auto w = std::min<Eigen::Index>(n - c0, 3 + static_cast<Eigen::Index>(unit(rng) * 10));
        img.block(r0, c0, h, w).setConstant(unit(rng));
    }
    const double lo = img.minCoeff();
    const double hi = img.maxCoeff();
    return (img.array() - lo) / (hi - lo);
}

void write_synthetic_instances(const std::filesystem::path& dir, std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    const NmfInstance nmf = synth_nmf(20, 30, 3, 2, seed);
    write_csv_matrix(dir / "nmf_A.csv", nmf.a);
    write_csv_matrix(dir / "nmf_B_true.csv", nmf.b_true);
    write_csv_matrix(dir / "nmf_C_true.csv", nmf.c_true);

    const BidInstance bid = synth_bid(64, 7, seed);
    write_pgm(dir / "bid_sharp.pgm", bid.sharp);
    write_pgm(dir / "bid_blurred.pgm", bid.blurred);
    write_csv_matrix(dir / "bid_blurred.csv", bid.blurred);
    write_csv_matrix(dir / "bid_kernel_true.csv", bid.kernel);
    write_pgm_max_scaled(dir / "bid_kernel_true.pgm", bid.kernel);

    const RowMatrix tex = synth_texture_image(32, seed);
    write_pgm(dir / "convlasso_image.pgm", tex);
    write_csv_matrix(dir / "convlasso_image.csv", tex);
}

}  // namespace ipalm
