#include "ipalm/image_ops.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "ipalm/errors.hpp"

namespace ipalm {

namespace {

struct Stencil {
    int di;
    int dj;
    double weight;
};

const std::array<Stencil, 8>& stencils() {
    static const double r2 = 1.0 / std::sqrt(2.0);
    static const double r5 = 1.0 / std::sqrt(5.0);
    static const std::array<Stencil, 8> table{{
        {1, 0, 1.0},
        {0, 1, 1.0},
        {1, 1, r2},
        {1, -1, r2},
        {2, 1, r5},
        {2, -1, r5},
        {1, 2, r5},
        {-1, 2, r5},
    }};
    return table;
}

const Stencil& stencil(int p) {
    if (p < 1 || p > 8) throw ParameterError("directional operator index must be in 1..8, got " + std::to_string(p));
    return stencils()[static_cast<std::size_t>(p - 1)];
}

void require_kernel_fits(Eigen::Index m1, Eigen::Index m2, Eigen::Index n1, Eigen::Index n2) {
    if (n1 <= 0 || n2 <= 0 || n1 > m1 || n2 > m2) {
        throw ShapeError("kernel " + std::to_string(n1) + "x" + std::to_string(n2) + " does not fit image " +
                         std::to_string(m1) + "x" + std::to_string(m2));
    }
}

// FFTW planning is not thread-safe; execution with new-array execute is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

class Spectrum {
public:
    Spectrum(Eigen::Index rows, Eigen::Index cols)
        : rows_(rows), cols_(cols), half_(cols / 2 + 1),
          data_(static_cast<std::size_t>(rows * half_)) {}

    static Spectrum forward(const ImageRef& img, Eigen::Index rows, Eigen::Index cols) {
        Spectrum s(rows, cols);
        RowMatrix padded = RowMatrix::Zero(rows, cols);
        padded.topLeftCorner(img.rows(), img.cols()) = img;
        fftw_plan plan;
        {
            std::lock_guard lock(fftw_mutex());
            plan = fftw_plan_dft_r2c_2d(static_cast<int>(rows), static_cast<int>(cols), padded.data(),
                                        reinterpret_cast<fftw_complex*>(s.data_.data()), FFTW_ESTIMATE);
        }
        fftw_execute(plan);
        {
            std::lock_guard lock(fftw_mutex());
            fftw_destroy_plan(plan);
        }
        return s;
    }

    RowMatrix inverse() const {
        std::vector<std::complex<double>> scratch = data_;  // c2r destroys its input
        RowMatrix out(rows_, cols_);
        fftw_plan plan;
        {
            std::lock_guard lock(fftw_mutex());
            plan = fftw_plan_dft_c2r_2d(static_cast<int>(rows_), static_cast<int>(cols_),
                                        reinterpret_cast<fftw_complex*>(scratch.data()), out.data(), FFTW_ESTIMATE);
        }
        fftw_execute(plan);
        {
            std::lock_guard lock(fftw_mutex());
            fftw_destroy_plan(plan);
        }
        out /= static_cast<double>(rows_ * cols_);
        return out;
    }

    std::vector<std::complex<double>>& values() { return data_; }
    const std::vector<std::complex<double>>& values() const { return data_; }

private:
    Eigen::Index rows_;
    Eigen::Index cols_;
    Eigen::Index half_;
    std::vector<std::complex<double>> data_;
};

std::vector<Eigen::Index> wrapped(Eigen::Index m, Eigen::Index shift) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = ((i + shift) % m + m) % m;
    return idx;
}

}  // namespace

RowMatrix dir_grad(const ImageRef& u, int p) {
    const Stencil& st = stencil(p);
    const Eigen::Index m1 = u.rows();
    const Eigen::Index m2 = u.cols();
    RowMatrix out = RowMatrix::Zero(m1, m2);
    for (Eigen::Index i = 0; i < m1; ++i) {
        const Eigen::Index ii = i + st.di;
        if (ii < 0 || ii >= m1) continue;
        for (Eigen::Index j = 0; j < m2; ++j) {
            const Eigen::Index jj = j + st.dj;
            if (jj < 0 || jj >= m2) continue;
            out(i, j) = st.weight * (u(ii, jj) - u(i, j));
        }
    }
    return out;
}

RowMatrix dir_grad_adjoint(const ImageRef& v, int p) {
    const Stencil& st = stencil(p);
    const Eigen::Index m1 = v.rows();
    const Eigen::Index m2 = v.cols();
    RowMatrix out = RowMatrix::Zero(m1, m2);
    for (Eigen::Index i = 0; i < m1; ++i) {
        const Eigen::Index ii = i + st.di;
        if (ii < 0 || ii >= m1) continue;
        for (Eigen::Index j = 0; j < m2; ++j) {
            const Eigen::Index jj = j + st.dj;
            if (jj < 0 || jj >= m2) continue;
            const double w = st.weight * v(i, j);
            out(ii, jj) += w;
            out(i, j) -= w;
        }
    }
    return out;
}

double phi_value(const ImageRef& x, double theta) {
    if (!(theta > 0.0)) throw ParameterError("phi: theta must be positive");
    return (theta * x.array().square()).log1p().sum();
}

RowMatrix phi_grad(const ImageRef& x, double theta) {
    if (!(theta > 0.0)) throw ParameterError("phi: theta must be positive");
    return (2.0 * theta * x.array() / (1.0 + theta * x.array().square())).matrix();
}

RowMatrix circ_conv(const ImageRef& u, const ImageRef& b, ConvPath path) {
    const Eigen::Index m1 = u.rows();
    const Eigen::Index m2 = u.cols();
    require_kernel_fits(m1, m2, b.rows(), b.cols());
    if (path == ConvPath::Fft) {
        Spectrum su = Spectrum::forward(u, m1, m2);
        const Spectrum sb = Spectrum::forward(b, m1, m2);
        for (std::size_t q = 0; q < su.values().size(); ++q) su.values()[q] *= sb.values()[q];
        return su.inverse();
    }
    RowMatrix out = RowMatrix::Zero(m1, m2);
    for (Eigen::Index k = 0; k < b.rows(); ++k) {
        const auto rows = wrapped(m1, -k);
        for (Eigen::Index l = 0; l < b.cols(); ++l) {
            const double w = b(k, l);
            if (w == 0.0) continue;
            const auto cols = wrapped(m2, -l);
            for (Eigen::Index i = 0; i < m1; ++i) {
                const Eigen::Index src = rows[static_cast<std::size_t>(i)];
                for (Eigen::Index j = 0; j < m2; ++j) out(i, j) += w * u(src, cols[static_cast<std::size_t>(j)]);
            }
        }
    }
    return out;
}

RowMatrix circ_correlate(const ImageRef& r, const ImageRef& b, ConvPath path) {
    const Eigen::Index m1 = r.rows();
    const Eigen::Index m2 = r.cols();
    require_kernel_fits(m1, m2, b.rows(), b.cols());
    if (path == ConvPath::Fft) {
        Spectrum sr = Spectrum::forward(r, m1, m2);
        const Spectrum sb = Spectrum::forward(b, m1, m2);
        for (std::size_t q = 0; q < sr.values().size(); ++q) sr.values()[q] *= std::conj(sb.values()[q]);
        return sr.inverse();
    }
    RowMatrix out = RowMatrix::Zero(m1, m2);
    for (Eigen::Index k = 0; k < b.rows(); ++k) {
        const auto rows = wrapped(m1, k);
        for (Eigen::Index l = 0; l < b.cols(); ++l) {
            const double w = b(k, l);
            if (w == 0.0) continue;
            const auto cols = wrapped(m2, l);
            for (Eigen::Index i = 0; i < m1; ++i) {
                const Eigen::Index src = rows[static_cast<std::size_t>(i)];
                for (Eigen::Index j = 0; j < m2; ++j) out(i, j) += w * r(src, cols[static_cast<std::size_t>(j)]);
            }
        }
    }
    return out;
}

RowMatrix kernel_correlate(const ImageRef& r, const ImageRef& u, std::size_t n1, std::size_t n2, ConvPath path) {
    const Eigen::Index m1 = r.rows();
    const Eigen::Index m2 = r.cols();
    if (u.rows() != m1 || u.cols() != m2) throw ShapeError("kernel_correlate: image shapes differ");
    const auto kn1 = static_cast<Eigen::Index>(n1);
    const auto kn2 = static_cast<Eigen::Index>(n2);
    require_kernel_fits(m1, m2, kn1, kn2);
    if (path == ConvPath::Fft) {
        Spectrum sr = Spectrum::forward(r, m1, m2);
        const Spectrum su = Spectrum::forward(u, m1, m2);
        for (std::size_t q = 0; q < sr.values().size(); ++q) sr.values()[q] *= std::conj(su.values()[q]);
        return sr.inverse().topLeftCorner(kn1, kn2);
    }
    RowMatrix out(kn1, kn2);
    for (Eigen::Index k = 0; k < kn1; ++k) {
        const auto rows = wrapped(m1, -k);
        for (Eigen::Index l = 0; l < kn2; ++l) {
            const auto cols = wrapped(m2, -l);
            double acc = 0.0;
            for (Eigen::Index i = 0; i < m1; ++i) {
                const Eigen::Index src = rows[static_cast<std::size_t>(i)];
                for (Eigen::Index j = 0; j < m2; ++j) acc += r(i, j) * u(src, cols[static_cast<std::size_t>(j)]);
            }
            out(k, l) = acc;
        }
    }
    return out;
}

}  // namespace ipalm
