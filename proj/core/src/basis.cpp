#include "cae/basis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cae/error.hpp"

namespace cae {

namespace {

void check_projection_shapes(const ComplexBasis& basis, Index x_len) {
    if (basis.w_re.rows() != basis.w_im.rows() || basis.w_re.cols() != basis.w_im.cols()) {
        std::ostringstream os;
        os << "basis parts disagree: w_re is " << basis.w_re.rows() << "x" << basis.w_re.cols()
           << ", w_im is " << basis.w_im.rows() << "x" << basis.w_im.cols();
        throw ShapeError(os.str());
    }
    if (x_len != basis.n_input()) {
        std::ostringstream os;
        os << "input length " << x_len << " does not match basis n_input " << basis.n_input();
        throw ShapeError(os.str());
    }
}

} // namespace

ComplexBasis ComplexBasis::random_init(Index n_basis, Index n_input, Rng& rng) {
    if (n_basis < 1 || n_input < 1)
        throw ValidationError("basis dimensions must be positive");
    const double bound = 1.0 / std::sqrt(static_cast<double>(n_input));
    ComplexBasis b;
    b.w_re.resize(n_basis, n_input);
    b.w_im.resize(n_basis, n_input);
    for (Index j = 0; j < n_basis; ++j) {
        for (Index k = 0; k < n_input; ++k)
            b.w_re(j, k) = rng.uniform(-bound, bound);
    }
    for (Index j = 0; j < n_basis; ++j) {
        for (Index k = 0; k < n_input; ++k)
            b.w_im(j, k) = rng.uniform(-bound, bound);
    }
    return b;
}

Vector ComplexBasis::row_norms() const {
    return (w_re.rowwise().squaredNorm() + w_im.rowwise().squaredNorm()).cwiseSqrt();
}

ComplexBasis dft_basis(Index n) {
    if (n < 1)
        throw ValidationError("dft_basis needs n >= 1");
    ComplexBasis b;
    b.w_re.resize(n, n);
    b.w_im.resize(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) {
            // angle reduced mod n to keep cos/sin accurate for large j*k
            const double angle = step * static_cast<double>((j * k) % n);
            b.w_re(j, k) = std::cos(angle) * scale;
            b.w_im(j, k) = -std::sin(angle) * scale;
        }
    }
    return b;
}

GradientSet GradientSet::zeros(Index n_basis, Index n_input) {
    GradientSet g;
    g.d_w_re = Matrix::Zero(n_basis, n_input);
    g.d_w_im = Matrix::Zero(n_basis, n_input);
    return g;
}

void project(const ComplexBasis& basis, const Vector& x, Vector& re, Vector& im) {
    check_projection_shapes(basis, x.size());
    if (!x.allFinite())
        throw ValidationError("projection input contains non-finite values");
    re.noalias() = basis.w_re * x;
    im.noalias() = basis.w_im * x;
}

void project(const ComplexBasis& basis, const Matrix& x_rows, Matrix& re, Matrix& im) {
    check_projection_shapes(basis, x_rows.cols());
    if (!x_rows.allFinite())
        throw ValidationError("projection input contains non-finite values");
    re.noalias() = x_rows * basis.w_re.transpose();
    im.noalias() = x_rows * basis.w_im.transpose();
}

PolarCode polar_encode(const Vector& re, const Vector& im) {
    if (re.size() != im.size()) {
        std::ostringstream os;
        os << "polar_encode length mismatch: " << re.size() << " vs " << im.size();
        throw ShapeError(os.str());
    }
    PolarCode code;
    code.phase.resize(re.size());
    code.magnitude.resize(re.size());
    for (Index j = 0; j < re.size(); ++j) {
        code.magnitude[j] = std::hypot(re[j], im[j]);
        double phi = std::atan2(re[j], im[j]);
        if (phi < 0.0)
            phi += 2.0 * std::numbers::pi;
        if (phi >= 2.0 * std::numbers::pi)
            phi = 0.0;
        code.phase[j] = phi;
    }
    return code;
}

Vector reconstruct_swapped(const ComplexBasis& basis, const Vector& phase_own,
                           const Vector& magnitude_other) {
    if (phase_own.size() != basis.n_basis() || magnitude_other.size() != basis.n_basis()) {
        std::ostringstream os;
        os << "reconstruct_swapped expects vectors of length " << basis.n_basis() << ", got "
           << phase_own.size() << " and " << magnitude_other.size();
        throw ShapeError(os.str());
    }
    const Vector sin_part = magnitude_other.array() * phase_own.array().sin();
    const Vector cos_part = magnitude_other.array() * phase_own.array().cos();
    return basis.w_re.transpose() * sin_part + basis.w_im.transpose() * cos_part;
}

Matrix magnitude_features(const ComplexBasis& basis, const Matrix& x_rows) {
    Matrix re, im;
    project(basis, x_rows, re, im);
    return (re.array().square() + im.array().square()).sqrt();
}

double wrap_angle(double a) {
    double w = std::remainder(a, 2.0 * std::numbers::pi);
    if (w <= -std::numbers::pi)
        w = std::numbers::pi;
    return w;
}

Vector phase_difference(const ComplexBasis& basis, const Vector& x, const Vector& y) {
    Vector re_x, im_x, re_y, im_y;
    project(basis, x, re_x, im_x);
    project(basis, y, re_y, im_y);
    const PolarCode px = polar_encode(re_x, im_x);
    const PolarCode py = polar_encode(re_y, im_y);
    Vector diff(px.phase.size());
    for (Index j = 0; j < diff.size(); ++j)
        diff[j] = wrap_angle(px.phase[j] - py.phase[j]);
    return diff;
}

void renormalize_basis(ComplexBasis& basis, double target_norm) {
    if (target_norm <= 0.0)
        throw ParameterError("target_norm must be positive");
    const Vector norms = basis.row_norms();
    for (Index j = 0; j < norms.size(); ++j) {
        if (norms[j] == 0.0) {
            std::ostringstream os;
            os << "basis row " << j << " has zero norm, cannot renormalize";
            throw NumericError(os.str());
        }
        const double s = target_norm / norms[j];
        basis.w_re.row(j) *= s;
        basis.w_im.row(j) *= s;
    }
}

NormPenalty norm_penalty(const ComplexBasis& basis, double lambda_mean, double lambda_dev) {
    if (lambda_mean < 0.0 || lambda_dev < 0.0)
        throw ParameterError("penalty weights must be non-negative");
    const Index m = basis.n_basis();
    const Vector norms = basis.row_norms();
    const double mean_norm = norms.mean();
    const double dev = (norms.array() - mean_norm).square().mean();

    NormPenalty p;
    p.value = lambda_mean * mean_norm + lambda_dev * dev;
    p.grads = GradientSet::zeros(m, basis.n_input());
    if (lambda_mean == 0.0 && lambda_dev == 0.0)
        return p;

    for (Index j = 0; j < m; ++j) {
        if (norms[j] == 0.0)
            continue; // flat direction, subgradient 0
        // d/d norm_j of the two terms; the mean-deviation cross terms cancel
        const double dp = lambda_mean / static_cast<double>(m) +
                          2.0 * lambda_dev * (norms[j] - mean_norm) / static_cast<double>(m);
        const double s = dp / norms[j];
        p.grads.d_w_re.row(j) = s * basis.w_re.row(j);
        p.grads.d_w_im.row(j) = s * basis.w_im.row(j);
    }
    return p;
}

} // namespace cae
