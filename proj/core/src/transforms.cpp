#include "cae/transforms.hpp"

#include <cmath>
#include <sstream>

#include "cae/error.hpp"

namespace cae {

namespace {

Matrix reshape_row(const Vector& row, Index rows, Index cols) {
    if (row.size() != rows * cols) {
        std::ostringstream os;
        os << "row of length " << row.size() << " cannot be reshaped to " << rows << "x" << cols;
        throw ShapeError(os.str());
    }
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c)
            m(r, c) = row[r * cols + c];
    return m;
}

Vector flatten(const Matrix& m) {
    Vector v(m.rows() * m.cols());
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c)
            v[r * m.cols() + c] = m(r, c);
    return v;
}

} // namespace

void TransformSpec::validate(Index n_input) const {
    if (hi < lo)
        throw ValidationError("transform parameter range is empty");
    switch (kind) {
    case TransformKind::circular_shift_1d:
        break;
    case TransformKind::pitch_shift:
    case TransformKind::time_shift:
        if (frames < 1 || bins < 1)
            throw ValidationError("n-gram grid dimensions must be positive");
        if (frames * bins != n_input)
            throw ShapeError("n-gram grid does not match the input length");
        break;
    case TransformKind::compose:
        if (frames < 1 || bins < 1)
            throw ValidationError("n-gram grid dimensions must be positive");
        if (frames * bins != n_input)
            throw ShapeError("n-gram grid does not match the input length");
        if (second_hi < second_lo)
            throw ValidationError("second transform parameter range is empty");
        break;
    case TransformKind::rotate_2d:
        if (height < 1 || width < 1)
            throw ValidationError("image grid dimensions must be positive");
        if (height * width != n_input)
            throw ShapeError("image grid does not match the input length");
        break;
    }
}

Vector circular_shift_1d(const Vector& x, long k) {
    const Index n = x.size();
    if (n == 0)
        return x;
    Vector y(n);
    const long m = static_cast<long>(n);
    for (Index i = 0; i < n; ++i) {
        long src = (static_cast<long>(i) - k) % m;
        if (src < 0)
            src += m;
        y[i] = x[src];
    }
    return y;
}

Matrix pitch_shift(const Matrix& ngram, long bins) {
    const Index f = ngram.cols();
    if (std::abs(bins) >= f) {
        std::ostringstream os;
        os << "pitch shift of " << bins << " bins exceeds the " << f << "-bin range";
        throw ParameterError(os.str());
    }
    Matrix out = Matrix::Zero(ngram.rows(), f);
    if (bins >= 0)
        out.rightCols(f - bins) = ngram.leftCols(f - bins);
    else
        out.leftCols(f + bins) = ngram.rightCols(f + bins);
    return out;
}

Matrix time_shift(const Matrix& ngram, long frames) {
    const Index t = ngram.rows();
    if (std::abs(frames) >= t) {
        std::ostringstream os;
        os << "time shift of " << frames << " frames exceeds the " << t << "-frame range";
        throw ParameterError(os.str());
    }
    Matrix out = Matrix::Zero(t, ngram.cols());
    if (frames >= 0)
        out.bottomRows(t - frames) = ngram.topRows(t - frames);
    else
        out.topRows(t + frames) = ngram.bottomRows(t + frames);
    return out;
}

Matrix rotate_2d(const Matrix& img, double theta) {
    if (img.rows() < 1 || img.cols() < 1)
        throw ValidationError("image must be non-empty");
    if (!std::isfinite(theta))
        throw ParameterError("rotation angle must be finite");
    if (theta == 0.0)
        return img;

    const double cy = static_cast<double>(img.rows() - 1) / 2.0;
    const double cx = static_cast<double>(img.cols() - 1) / 2.0;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Matrix out(img.rows(), img.cols());
    for (Index r = 0; r < img.rows(); ++r) {
        for (Index col = 0; col < img.cols(); ++col) {
            // inverse map: rotate the output pixel back by theta
            const double dy = static_cast<double>(r) - cy;
            const double dx = static_cast<double>(col) - cx;
            const double sy = cy + (c * dy + s * dx);
            const double sx = cx + (-s * dy + c * dx);
            const double fy = std::floor(sy);
            const double fx = std::floor(sx);
            const Index y0 = static_cast<Index>(fy);
            const Index x0 = static_cast<Index>(fx);
            const double wy = sy - fy;
            const double wx = sx - fx;
            const auto sample = [&](Index yy, Index xx) {
                return (yy >= 0 && yy < img.rows() && xx >= 0 && xx < img.cols()) ? img(yy, xx)
                                                                                  : 0.0;
            };
            out(r, col) = (1.0 - wy) * (1.0 - wx) * sample(y0, x0) +
                          (1.0 - wy) * wx * sample(y0, x0 + 1) +
                          wy * (1.0 - wx) * sample(y0 + 1, x0) +
                          wy * wx * sample(y0 + 1, x0 + 1);
        }
    }
    return out;
}

Vector apply_transform(const Vector& row, const TransformSpec& spec, double p1, double p2) {
    switch (spec.kind) {
    case TransformKind::circular_shift_1d:
        return circular_shift_1d(row, static_cast<long>(p1));
    case TransformKind::pitch_shift:
        return flatten(pitch_shift(reshape_row(row, spec.frames, spec.bins),
                                   static_cast<long>(p1)));
    case TransformKind::time_shift:
        return flatten(time_shift(reshape_row(row, spec.frames, spec.bins),
                                  static_cast<long>(p1)));
    case TransformKind::compose: {
        Matrix g = reshape_row(row, spec.frames, spec.bins);
        g = pitch_shift(g, static_cast<long>(p1));
        g = time_shift(g, static_cast<long>(p2));
        return flatten(g);
    }
    case TransformKind::rotate_2d:
        return flatten(rotate_2d(reshape_row(row, spec.height, spec.width), p1));
    }
    throw ParameterError("unhandled transform kind");
}

TransformPairBatch sample_pair(const Matrix& dataset, const TransformSpec& spec,
                               PairScheme scheme, Index batch, Rng& rng) {
    if (dataset.rows() == 0)
        throw ValidationError("dataset is empty");
    if (batch < 1)
        throw ValidationError("batch size must be >= 1");
    spec.validate(dataset.cols());

    const bool angular = spec.kind == TransformKind::rotate_2d;
    const auto draw = [&](double lo, double hi) {
        if (angular)
            return lo < hi ? rng.uniform(lo, hi) : lo;
        return static_cast<double>(rng.uniform_int(static_cast<long>(lo), static_cast<long>(hi)));
    };

    const int arity = spec.arity();
    TransformPairBatch out;
    out.a.resize(batch, dataset.cols());
    out.b.resize(batch, dataset.cols());
    out.params.resize(batch, 2 * arity);

    for (Index i = 0; i < batch; ++i) {
        const Index src = rng.uniform_int(0, dataset.rows() - 1);
        const Vector x = dataset.row(src).transpose();

        double first1 = 0.0, first2 = 0.0;
        Vector a;
        if (scheme == PairScheme::double_transform) {
            first1 = draw(spec.lo, spec.hi);
            if (arity == 2)
                first2 = draw(spec.second_lo, spec.second_hi);
            a = apply_transform(x, spec, first1, first2);
        } else {
            a = x;
        }

        const double second1 = draw(spec.lo, spec.hi);
        const double second2 = arity == 2 ? draw(spec.second_lo, spec.second_hi) : 0.0;
        const Vector b = apply_transform(a, spec, second1, second2);

        out.a.row(i) = a.transpose();
        out.b.row(i) = b.transpose();
        if (arity == 1) {
            out.params(i, 0) = first1;
            out.params(i, 1) = second1;
        } else {
            out.params(i, 0) = first1;
            out.params(i, 1) = first2;
            out.params(i, 2) = second1;
            out.params(i, 3) = second2;
        }
    }
    return out;
}

std::string to_string(TransformKind kind) {
    switch (kind) {
    case TransformKind::circular_shift_1d: return "circular_shift";
    case TransformKind::pitch_shift: return "pitch_shift";
    case TransformKind::time_shift: return "time_shift";
    case TransformKind::rotate_2d: return "rotate";
    case TransformKind::compose: return "pitch_time_shift";
    }
    return "circular_shift";
}

TransformKind transform_kind_from_string(const std::string& s) {
    if (s == "circular_shift") return TransformKind::circular_shift_1d;
    if (s == "pitch_shift") return TransformKind::pitch_shift;
    if (s == "time_shift") return TransformKind::time_shift;
    if (s == "rotate") return TransformKind::rotate_2d;
    if (s == "pitch_time_shift") return TransformKind::compose;
    throw ParameterError("unknown transform kind: " + s);
}

} // namespace cae
