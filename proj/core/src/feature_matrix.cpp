#include "cae/feature_matrix.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "cae/error.hpp"
#include "cae/io_util.hpp"

namespace cae {

namespace {

constexpr char kFtmMagic[4] = {'F', 'T', 'M', '1'};

FeatureMatrix load_ftm(std::istream& in, const std::filesystem::path& path) {
    in.seekg(4); // past magic
    std::uint32_t t = 0, f = 0;
    double hop = 0.0;
    if (!io::read_u32_le(in, t) || !io::read_u32_le(in, f) || !io::read_f64_le(in, hop))
        throw FormatError(path.string() + ": truncated FTM1 header at byte " +
                          std::to_string(static_cast<long>(in.tellg())));
    if (t == 0 || f == 0)
        throw FormatError(path.string() + ": FTM1 header declares an empty matrix");
    FeatureMatrix fm;
    fm.frame_hop_seconds = hop;
    fm.meta = path.string();
    fm.values.resize(t, f);
    for (std::uint32_t i = 0; i < t; ++i) {
        for (std::uint32_t j = 0; j < f; ++j) {
            double v = 0.0;
            if (!io::read_f64_le(in, v))
                throw FormatError(path.string() + ": truncated FTM1 payload at byte " +
                                  std::to_string(16 + 8 * (static_cast<long>(i) * f + j)));
            fm.values(i, j) = v;
        }
    }
    return fm;
}

FeatureMatrix load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t pos = 0;
                row.push_back(std::stod(cell, &pos));
                while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos])))
                    ++pos;
                if (pos != cell.size())
                    throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw FormatError(path.string() + ": bad number '" + cell + "' at line " +
                                  std::to_string(line_no));
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw FormatError(path.string() + ": ragged row at line " + std::to_string(line_no) +
                              " (" + std::to_string(row.size()) + " cells, expected " +
                              std::to_string(rows.front().size()) + ")");
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw FormatError(path.string() + ": no data rows");
    FeatureMatrix fm;
    fm.meta = path.string();
    fm.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < fm.values.rows(); ++i)
        for (Index j = 0; j < fm.values.cols(); ++j)
            fm.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return fm;
}

} // namespace

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open " + path.string());
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    if (in.gcount() == 0)
        throw FormatError(path.string() + ": empty file");
    if (in.gcount() == 4 && std::memcmp(magic, kFtmMagic, 4) == 0)
        return load_ftm(in, path);
    in.close();
    return load_csv(path);
}

void save_feature_matrix_ftm(const std::filesystem::path& path, const FeatureMatrix& fm) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot open " + path.string() + " for writing");
    out.write(kFtmMagic, 4);
    io::write_u32_le(out, static_cast<std::uint32_t>(fm.values.rows()));
    io::write_u32_le(out, static_cast<std::uint32_t>(fm.values.cols()));
    io::write_f64_le(out, fm.frame_hop_seconds);
    for (Index i = 0; i < fm.values.rows(); ++i)
        for (Index j = 0; j < fm.values.cols(); ++j)
            io::write_f64_le(out, fm.values(i, j));
    if (!out)
        throw FormatError("write failed: " + path.string());
}

void save_feature_matrix_csv(const std::filesystem::path& path, const FeatureMatrix& fm) {
    std::ofstream out(path);
    if (!out)
        throw FormatError("cannot open " + path.string() + " for writing");
    out.precision(17);
    for (Index i = 0; i < fm.values.rows(); ++i) {
        for (Index j = 0; j < fm.values.cols(); ++j) {
            if (j)
                out << ',';
            out << fm.values(i, j);
        }
        out << '\n';
    }
    if (!out)
        throw FormatError("write failed: " + path.string());
}

std::pair<Matrix, StandardizationStats> standardize(const Matrix& x) {
    StandardizationStats stats;
    stats.mean = x.colwise().mean();
    Matrix centered = x.rowwise() - stats.mean.transpose();
    stats.std = (centered.array().square().colwise().mean()).sqrt().matrix();
    stats.std = stats.std.cwiseMax(1e-8);
    return {standardize(x, stats), std::move(stats)};
}

Matrix standardize(const Matrix& x, const StandardizationStats& stats) {
    if (stats.mean.size() != x.cols() || stats.std.size() != x.cols())
        throw ShapeError("standardization stats width does not match data");
    Matrix out = x.rowwise() - stats.mean.transpose();
    out.array().rowwise() /= stats.std.transpose().array();
    return out;
}

Matrix ngram_slice(const Matrix& x, Index n, Index hop_frames) {
    if (n < 1 || hop_frames < 1)
        throw ValidationError("ngram size and hop must be >= 1");
    if (x.rows() < n)
        throw ValidationError("matrix has " + std::to_string(x.rows()) +
                              " frames, fewer than the n-gram size " + std::to_string(n));
    const Index f = x.cols();
    const Index count = (x.rows() - n) / hop_frames + 1;
    Matrix out(count, n * f);
    for (Index w = 0; w < count; ++w) {
        const Index start = w * hop_frames;
        for (Index t = 0; t < n; ++t)
            for (Index j = 0; j < f; ++j)
                out(w, t * f + j) = x(start + t, j);
    }
    return out;
}

Vector input_dropout(const Vector& x, double p, Rng& rng) {
    if (p < 0.0 || p >= 1.0)
        throw ParameterError("dropout probability must lie in [0, 1)");
    if (p == 0.0)
        return x;
    const double scale = 1.0 / (1.0 - p);
    Vector out(x.size());
    for (Index i = 0; i < x.size(); ++i)
        out[i] = rng.uniform() < p ? 0.0 : x[i] * scale;
    return out;
}

void input_dropout_inplace(Matrix& rows, double p, Rng& rng) {
    if (p < 0.0 || p >= 1.0)
        throw ParameterError("dropout probability must lie in [0, 1)");
    if (p == 0.0)
        return;
    const double scale = 1.0 / (1.0 - p);
    for (Index i = 0; i < rows.rows(); ++i)
        for (Index j = 0; j < rows.cols(); ++j)
            rows(i, j) = rng.uniform() < p ? 0.0 : rows(i, j) * scale;
}

} // namespace cae
