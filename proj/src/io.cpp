#include "ipalm/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "ipalm/errors.hpp"

namespace ipalm {

namespace fs = std::filesystem;

RowMatrix read_csv_matrix(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw DataError(path.string() + ":" + std::to_string(line_no) + ": not a number: '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(rows.front().size()) + " columns, got " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError(path.string() + ": empty matrix");
    RowMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

void write_csv_matrix(const fs::path& path, const Eigen::Ref<const RowMatrix>& m) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
    std::string token;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!token.empty()) break;
            continue;
        }
        token.push_back(static_cast<char>(c));
    }
    return token;
}

}  // namespace

RowMatrix read_pgm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    if (pgm_token(in) != "P5") throw DataError(path.string() + ": not a binary PGM (P5)");
    int width = 0;
    int height = 0;
    int maxval = 0;
    try {
        width = std::stoi(pgm_token(in));
        height = std::stoi(pgm_token(in));
        maxval = std::stoi(pgm_token(in));
    } catch (const std::exception&) {
        throw DataError(path.string() + ": malformed PGM header");
    }
    if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255) {
        throw DataError(path.string() + ": unsupported PGM geometry or depth (8-bit only)");
    }
    std::vector<unsigned char> buf(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size())) throw DataError(path.string() + ": truncated PGM");
    RowMatrix img(height, width);
    for (int i = 0; i < height; ++i) {
        for (int j = 0; j < width; ++j) {
            img(i, j) = buf[static_cast<std::size_t>(i) * static_cast<std::size_t>(width) + static_cast<std::size_t>(j)] /
                        static_cast<double>(maxval);
        }
    }
    return img;
}

void write_pgm(const fs::path& path, const Eigen::Ref<const RowMatrix>& img, double lo, double hi) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << "P5\n" << img.cols() << ' ' << img.rows() << "\n255\n";
    const double span = hi > lo ? hi - lo : 1.0;
    std::vector<unsigned char> buf(static_cast<std::size_t>(img.size()));
    std::size_t q = 0;
    for (Eigen::Index i = 0; i < img.rows(); ++i) {
        for (Eigen::Index j = 0; j < img.cols(); ++j) {
            const double v = std::clamp((img(i, j) - lo) / span, 0.0, 1.0);
            buf[q++] = static_cast<unsigned char>(std::lround(255.0 * v));
        }
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

void write_pgm(const fs::path& path, const Eigen::Ref<const RowMatrix>& img) {
    write_pgm(path, img, 0.0, 1.0);
}

void write_pgm_max_scaled(const fs::path& path, const Eigen::Ref<const RowMatrix>& img) {
    const double hi = img.size() > 0 ? img.maxCoeff() : 0.0;
    write_pgm(path, img, 0.0, hi > 0.0 ? hi : 1.0);
}

RowMatrix read_image(const fs::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm") return read_pgm(path);
    if (ext == ".csv") return read_csv_matrix(path);
    throw DataError(path.string() + ": unsupported image format (expected .pgm or .csv)");
}

ImageColumns load_pgm_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw DataError(dir.string() + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        auto ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (entry.is_regular_file() && ext == ".pgm") files.push_back(entry.path());
    }
    if (files.empty()) throw DataError("no .pgm images under " + dir.string());
    std::sort(files.begin(), files.end());

    ImageColumns out;
    for (std::size_t c = 0; c < files.size(); ++c) {
        const RowMatrix img = read_pgm(files[c]);
        if (c == 0) {
            out.height = static_cast<std::size_t>(img.rows());
            out.width = static_cast<std::size_t>(img.cols());
            out.data.resize(img.size(), static_cast<Eigen::Index>(files.size()));
        } else if (static_cast<std::size_t>(img.rows()) != out.height ||
                   static_cast<std::size_t>(img.cols()) != out.width) {
            throw DataError(files[c].string() + ": image size differs from " + files[0].string());
        }
        out.data.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const Eigen::VectorXd>(img.data(), img.size());
    }
    return out;
}

RowMatrix mosaic(const std::vector<RowMatrix>& tiles, std::size_t columns, double gap_value) {
    if (tiles.empty()) return RowMatrix();
    if (columns == 0) columns = 1;
    const Eigen::Index th = tiles.front().rows();
    const Eigen::Index tw = tiles.front().cols();
    const auto ncol = static_cast<Eigen::Index>(std::min(columns, tiles.size()));
    const auto nrow = static_cast<Eigen::Index>((tiles.size() + columns - 1) / columns);
    RowMatrix out = RowMatrix::Constant(nrow * (th + 1) - 1, ncol * (tw + 1) - 1, gap_value);
    for (std::size_t t = 0; t < tiles.size(); ++t) {
        if (tiles[t].rows() != th || tiles[t].cols() != tw) throw ShapeError("mosaic: tiles differ in size");
        const auto r = static_cast<Eigen::Index>(t / columns);
        const auto c = static_cast<Eigen::Index>(t % columns);
        out.block(r * (th + 1), c * (tw + 1), th, tw) = tiles[t];
    }
    return out;
}

}  // namespace ipalm
