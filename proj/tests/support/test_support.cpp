#include "test_support.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>

#include <unistd.h>

#include "cae/transforms.hpp"

namespace cae::testsupport {

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("caekit_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
}

void dft_direct(const Vector& x, Vector& re, Vector& im) {
    const Index n = x.size();
    re.resize(n);
    im.resize(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Index j = 0; j < n; ++j) {
        double acc_re = 0.0;
        double acc_im = 0.0;
        for (Index m = 0; m < n; ++m) {
            const double angle =
                2.0 * std::numbers::pi * static_cast<double>((j * m) % n) / static_cast<double>(n);
            acc_re += x[m] * std::cos(angle);
            acc_im -= x[m] * std::sin(angle);
        }
        re[j] = acc_re * scale;
        im[j] = acc_im * scale;
    }
}

Vector dft_magnitudes_direct(const Vector& x) {
    Vector re, im;
    dft_direct(x, re, im);
    Vector mag(x.size());
    for (Index j = 0; j < x.size(); ++j)
        mag[j] = std::hypot(re[j], im[j]);
    return mag;
}

Vector dft_phases_direct(const Vector& x) {
    Vector re, im;
    dft_direct(x, re, im);
    Vector phase(x.size());
    for (Index j = 0; j < x.size(); ++j) {
        double phi = std::atan2(re[j], im[j]);
        if (phi < 0.0)
            phi += 2.0 * std::numbers::pi;
        phase[j] = phi;
    }
    return phase;
}

double dtw_cost_recursive(const Matrix& frame_dist) {
    const Index n = frame_dist.rows();
    const Index m = frame_dist.cols();
    Matrix memo = Matrix::Constant(n, m, -1.0);
    std::function<double(Index, Index)> best = [&](Index i, Index j) -> double {
        if (i < 0 || j < 0)
            return std::numeric_limits<double>::infinity();
        if (i == 0 && j == 0)
            return frame_dist(0, 0);
        if (memo(i, j) >= 0.0)
            return memo(i, j);
        const double v =
            frame_dist(i, j) + std::min({best(i - 1, j - 1), best(i - 1, j), best(i, j - 1)});
        memo(i, j) = v;
        return v;
    };
    return best(n - 1, m - 1);
}

Matrix cosine_distance_matrix(const Matrix& a, const Matrix& b) {
    Matrix d(a.rows(), b.rows());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < b.rows(); ++j) {
            const double na = a.row(i).norm();
            const double nb = b.row(j).norm();
            if (na == 0.0 || nb == 0.0) {
                d(i, j) = 1.0;
            } else {
                d(i, j) = std::max(0.0, 1.0 - a.row(i).dot(b.row(j)) / (na * nb));
            }
        }
    }
    return d;
}

Matrix random_smooth_signals(Index count, Index n, Index max_harmonic, std::uint64_t seed) {
    Rng rng(seed);
    Matrix out(count, n);
    for (Index i = 0; i < count; ++i) {
        out.row(i).setZero();
        for (Index h = 1; h <= max_harmonic; ++h) {
            const double amp = rng.uniform(0.3, 1.0) / static_cast<double>(h);
            const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            for (Index t = 0; t < n; ++t)
                out(i, t) += amp * std::sin(2.0 * std::numbers::pi * static_cast<double>(h) *
                                                static_cast<double>(t) / static_cast<double>(n) +
                                            phase);
        }
    }
    return out;
}

Matrix random_normal_matrix(Index rows, Index cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix out(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            out(i, j) = rng.normal();
    return out;
}

Matrix random_walk_frames(Index frames, Index dims, std::uint64_t seed) {
    Rng rng(seed);
    Matrix out(frames, dims);
    for (Index j = 0; j < dims; ++j)
        out(0, j) = rng.normal();
    for (Index t = 1; t < frames; ++t)
        for (Index j = 0; j < dims; ++j)
            out(t, j) = 0.92 * out(t - 1, j) + 0.4 * rng.normal();
    return out;
}

namespace {

struct Stroke {
    enum class Kind { spoke, ring, disk, dot } kind;
    double angle = 0.0;  // spoke direction / dot direction, radians
    double r0 = 0.0;     // inner radius (spoke/ring) or center radius (dot)
    double r1 = 0.0;     // outer radius
    double width = 1.6;
};

// Each class is a rigid arrangement. Spoke patterns are irregular so no class
// has rotational symmetry; several classes differ only in the marker-dot
// radius or core shape, which keeps them close in pixel space.
std::vector<std::vector<Stroke>> glyph_templates() {
    const auto deg = [](double d) { return d * std::numbers::pi / 180.0; };
    std::vector<std::vector<Stroke>> tpl(10);
    using K = Stroke::Kind;
    // ring-core family
    tpl[0] = {{K::ring, 0, 8.2, 10.2}, {K::spoke, deg(0), 1.5, 7.5}};
    tpl[1] = {{K::ring, 0, 8.2, 10.2}, {K::spoke, deg(0), 1.5, 7.5},
              {K::spoke, deg(140), 1.5, 7.5}};
    tpl[2] = {{K::ring, 0, 8.2, 10.2}, {K::spoke, deg(0), 1.5, 7.5},
              {K::spoke, deg(100), 1.5, 7.5}, {K::spoke, deg(205), 1.5, 7.5}};
    tpl[3] = {{K::ring, 0, 8.2, 10.2}, {K::spoke, deg(0), 1.5, 7.5}, {K::dot, deg(0), 4.6, 0, 2.2}};
    tpl[4] = {{K::ring, 0, 8.2, 10.2}, {K::spoke, deg(0), 1.5, 7.5},
              {K::spoke, deg(140), 1.5, 7.5}, {K::dot, deg(70), 4.6, 0, 2.2}};
    // disk-core family
    tpl[5] = {{K::disk, 0, 0, 3.4}, {K::spoke, deg(0), 5.0, 11.5}};
    tpl[6] = {{K::disk, 0, 0, 3.4}, {K::spoke, deg(0), 5.0, 11.5},
              {K::spoke, deg(140), 5.0, 11.5}};
    tpl[7] = {{K::disk, 0, 0, 3.4}, {K::spoke, deg(0), 5.0, 11.5},
              {K::spoke, deg(100), 5.0, 11.5}, {K::spoke, deg(205), 5.0, 11.5}};
    tpl[8] = {{K::disk, 0, 0, 3.4}, {K::spoke, deg(0), 5.0, 11.5}, {K::dot, deg(180), 8.0, 0, 2.2}};
    tpl[9] = {{K::disk, 0, 0, 3.4}, {K::spoke, deg(0), 5.0, 11.5},
              {K::spoke, deg(140), 5.0, 11.5}, {K::dot, deg(250), 8.0, 0, 2.2}};
    return tpl;
}

double stroke_intensity(const Stroke& s, double x, double y, double scale, double width_jitter) {
    // soft-edged distance fields, evaluated in canonical (unrotated) pose
    const double r = std::hypot(x, y);
    const double soften = 0.7;
    const auto soft = [&](double dist, double half_width) {
        const double t = (half_width - dist) / soften;
        return std::clamp(0.5 + 0.5 * t, 0.0, 1.0);
    };
    switch (s.kind) {
    case Stroke::Kind::spoke: {
        const double c = std::cos(s.angle);
        const double sn = std::sin(s.angle);
        const double along = x * c + y * sn;
        const double across = -x * sn + y * c;
        const double lo = s.r0 * scale;
        const double hi = s.r1 * scale;
        if (along < lo || along > hi)
            return 0.0;
        return soft(std::abs(across), 0.5 * s.width * width_jitter);
    }
    case Stroke::Kind::ring:
        return soft(std::abs(r - 0.5 * (s.r0 + s.r1) * scale),
                    0.5 * (s.r1 - s.r0) * scale * width_jitter);
    case Stroke::Kind::disk:
        return soft(r - s.r1 * scale, 0.0) ;
    case Stroke::Kind::dot: {
        const double cx = s.r0 * scale * std::cos(s.angle);
        const double cy = s.r0 * scale * std::sin(s.angle);
        return soft(std::hypot(x - cx, y - cy) - 0.5 * s.width, 0.0);
    }
    }
    return 0.0;
}

} // namespace

LabeledImages make_glyphs(Index per_class, std::uint64_t seed, const GlyphOptions& options,
                          std::vector<double>& angles_out) {
    const auto templates = glyph_templates();
    const Index size = options.size;
    Rng rng(seed);

    LabeledImages data;
    data.height = size;
    data.width = size;
    data.pixels.resize(per_class * 10, size * size);
    data.labels.resize(static_cast<std::size_t>(per_class) * 10);
    angles_out.assign(static_cast<std::size_t>(per_class) * 10, 0.0);

    const double center = static_cast<double>(size - 1) / 2.0;
    Index row = 0;
    for (Index rep = 0; rep < per_class; ++rep) {
        for (int cls = 0; cls < 10; ++cls, ++row) {
            const double scale = rng.uniform(0.92, 1.08);
            const double width_jitter = rng.uniform(0.85, 1.15);
            const double gain = rng.uniform(0.8, 1.0);
            const double theta = options.rotate ? rng.uniform(0.0, 2.0 * std::numbers::pi) : 0.0;
            angles_out[static_cast<std::size_t>(row)] = theta;
            const double c = std::cos(theta);
            const double sn = std::sin(theta);

            for (Index py = 0; py < size; ++py) {
                for (Index px = 0; px < size; ++px) {
                    const double dx = static_cast<double>(px) - center;
                    const double dy = static_cast<double>(py) - center;
                    // rotate the sample point back into canonical pose
                    const double cx = c * dx + sn * dy;
                    const double cy = -sn * dx + c * dy;
                    double v = 0.0;
                    for (const Stroke& s : templates[static_cast<std::size_t>(cls)])
                        v = std::max(v, stroke_intensity(s, cx, cy, scale, width_jitter));
                    v = gain * v + rng.uniform(0.0, options.noise);
                    data.pixels(row, py * size + px) = std::clamp(v, 0.0, 1.0);
                }
            }
            data.labels[static_cast<std::size_t>(row)] = cls;
        }
    }
    return data;
}

LabeledImages make_glyphs(Index per_class, std::uint64_t seed, const GlyphOptions& options) {
    std::vector<double> angles;
    return make_glyphs(per_class, seed, options, angles);
}

} // namespace cae::testsupport
