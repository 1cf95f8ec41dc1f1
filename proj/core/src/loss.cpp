#include "cae/loss.hpp"

#include <cmath>
#include <sstream>

#include "cae/error.hpp"

namespace cae {

namespace {

void check_pair_batch(const ComplexBasis& basis, const Matrix& a, const Matrix& b, int p) {
    if (p != 1 && p != 2)
        throw ParameterError("p must be 1 or 2");
    if (a.rows() == 0)
        throw ValidationError("pair batch is empty");
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream os;
        os << "pair batch shapes differ: " << a.rows() << "x" << a.cols() << " vs " << b.rows()
           << "x" << b.cols();
        throw ShapeError(os.str());
    }
    if (a.cols() != basis.n_input()) {
        std::ostringstream os;
        os << "pair batch width " << a.cols() << " does not match basis n_input "
           << basis.n_input();
        throw ShapeError(os.str());
    }
}

// Intermediates of the swapped-magnitude reconstruction of one batch.
struct Forward {
    Matrix re_a, im_a, re_b, im_b; // B x M projections
    Matrix r_a, r_b;               // magnitudes
    Matrix sin_a, cos_a, sin_b, cos_b;
    Matrix swap_sin_a, swap_cos_a; // r_b .* sin/cos(phi_a)
    Matrix swap_sin_b, swap_cos_b; // r_a .* sin/cos(phi_b)
    Matrix a_hat, b_hat;           // B x N reconstructions
};

// sin(phi) = re/r and cos(phi) = im/r with the convention phi = atan2(re, im);
// at r = 0 both are taken as 0 (flat point of the swap products).
void unit_parts(const Matrix& re, const Matrix& im, const Matrix& r, Matrix& s, Matrix& c) {
    const auto safe = (r.array() > 0.0).select(r.array(), 1.0);
    s = (r.array() > 0.0).select(re.array() / safe, 0.0);
    c = (r.array() > 0.0).select(im.array() / safe, 0.0);
}

Forward run_forward(const ComplexBasis& basis, const Matrix& a, const Matrix& b) {
    Forward f;
    project(basis, a, f.re_a, f.im_a);
    project(basis, b, f.re_b, f.im_b);
    f.r_a = (f.re_a.array().square() + f.im_a.array().square()).sqrt();
    f.r_b = (f.re_b.array().square() + f.im_b.array().square()).sqrt();
    unit_parts(f.re_a, f.im_a, f.r_a, f.sin_a, f.cos_a);
    unit_parts(f.re_b, f.im_b, f.r_b, f.sin_b, f.cos_b);
    f.swap_sin_a = f.r_b.array() * f.sin_a.array();
    f.swap_cos_a = f.r_b.array() * f.cos_a.array();
    f.swap_sin_b = f.r_a.array() * f.sin_b.array();
    f.swap_cos_b = f.r_a.array() * f.cos_b.array();
    f.a_hat.noalias() = f.swap_sin_a * basis.w_re;
    f.a_hat.noalias() += f.swap_cos_a * basis.w_im;
    f.b_hat.noalias() = f.swap_sin_b * basis.w_re;
    f.b_hat.noalias() += f.swap_cos_b * basis.w_im;
    return f;
}

double elementwise_loss_sum(const Matrix& err, int p) {
    if (p == 2)
        return err.array().square().sum();
    return err.array().abs().sum();
}

// d/d err of |err|^p summed: 2*err for p=2, sign(err) for p=1 (0 at 0).
Matrix elementwise_loss_grad(const Matrix& err, int p) {
    if (p == 2)
        return 2.0 * err;
    return err.array().sign();
}

} // namespace

double reconstruction_loss(const Vector& x, const Vector& x_hat, const Vector& tx,
                           const Vector& tx_hat, int p) {
    if (p != 1 && p != 2)
        throw ParameterError("p must be 1 or 2");
    const Index n = x.size();
    if (x_hat.size() != n || tx.size() != n || tx_hat.size() != n)
        throw ShapeError("reconstruction_loss vectors must all have the same length");
    const auto term = [&](const Vector& v, const Vector& v_hat) {
        if (p == 2)
            return (v - v_hat).array().square().sum() / static_cast<double>(n);
        return (v - v_hat).array().abs().sum() / static_cast<double>(n);
    };
    return term(x, x_hat) + term(tx, tx_hat);
}

double forward_batch_loss(const ComplexBasis& basis, const Matrix& a, const Matrix& b, int p) {
    check_pair_batch(basis, a, b, p);
    const Forward f = run_forward(basis, a, b);
    const double norm = static_cast<double>(a.rows()) * static_cast<double>(a.cols());
    return (elementwise_loss_sum(a - f.a_hat, p) + elementwise_loss_sum(b - f.b_hat, p)) / norm;
}

BackwardResult backward(const ComplexBasis& basis, const Matrix& a, const Matrix& b, int p) {
    return backward_with_targets(basis, a, b, a, b, p);
}

BackwardResult backward_with_targets(const ComplexBasis& basis, const Matrix& a, const Matrix& b,
                                     const Matrix& target_a, const Matrix& target_b, int p) {
    check_pair_batch(basis, a, b, p);
    if (target_a.rows() != a.rows() || target_a.cols() != a.cols() ||
        target_b.rows() != b.rows() || target_b.cols() != b.cols())
        throw ShapeError("target shapes do not match the pair batch");
    const Forward f = run_forward(basis, a, b);

    if (!f.a_hat.allFinite() || !f.b_hat.allFinite()) {
        for (Index i = 0; i < a.rows(); ++i) {
            if (!f.a_hat.row(i).allFinite() || !f.b_hat.row(i).allFinite()) {
                std::ostringstream os;
                os << "non-finite reconstruction at batch index " << i;
                throw NumericError(os.str());
            }
        }
    }

    const double norm = static_cast<double>(a.rows()) * static_cast<double>(a.cols());
    const Matrix err_a = target_a - f.a_hat;
    const Matrix err_b = target_b - f.b_hat;
    const double loss = (elementwise_loss_sum(err_a, p) + elementwise_loss_sum(err_b, p)) / norm;

    // dL/d a_hat and dL/d b_hat
    const Matrix d_a_hat = -elementwise_loss_grad(err_a, p) / norm;
    const Matrix d_b_hat = -elementwise_loss_grad(err_b, p) / norm;

    GradientSet g = GradientSet::zeros(basis.n_basis(), basis.n_input());

    // a_hat = swap_sin_a * w_re + swap_cos_a * w_im (and likewise for b_hat)
    g.d_w_re.noalias() = f.swap_sin_a.transpose() * d_a_hat;
    g.d_w_re.noalias() += f.swap_sin_b.transpose() * d_b_hat;
    g.d_w_im.noalias() = f.swap_cos_a.transpose() * d_a_hat;
    g.d_w_im.noalias() += f.swap_cos_b.transpose() * d_b_hat;

    Matrix d_swap_sin_a = d_a_hat * basis.w_re.transpose();
    Matrix d_swap_cos_a = d_a_hat * basis.w_im.transpose();
    Matrix d_swap_sin_b = d_b_hat * basis.w_re.transpose();
    Matrix d_swap_cos_b = d_b_hat * basis.w_im.transpose();

    // swap_sin_a = r_b .* sin_a etc.
    Matrix d_r_b = f.sin_a.array() * d_swap_sin_a.array() + f.cos_a.array() * d_swap_cos_a.array();
    Matrix d_r_a = f.sin_b.array() * d_swap_sin_b.array() + f.cos_b.array() * d_swap_cos_b.array();
    Matrix d_sin_a = f.r_b.array() * d_swap_sin_a.array();
    Matrix d_cos_a = f.r_b.array() * d_swap_cos_a.array();
    Matrix d_sin_b = f.r_a.array() * d_swap_sin_b.array();
    Matrix d_cos_b = f.r_a.array() * d_swap_cos_b.array();

    // Through sin = re/r, cos = im/r, r = sqrt(re^2 + im^2):
    //   d sin/d re = cos^2/r, d sin/d im = -sin*cos/r,
    //   d cos/d re = -sin*cos/r, d cos/d im = sin^2/r,
    //   d r/d re = sin, d r/d im = cos.
    // Contributions with a 1/r factor are dropped at r = 0.
    const auto back_to_projection = [](const Matrix& r, const Matrix& s, const Matrix& c,
                                       const Matrix& ds, const Matrix& dc, const Matrix& dr,
                                       Matrix& d_re, Matrix& d_im) {
        const auto safe = (r.array() > 0.0).select(r.array(), 1.0);
        const auto inv_r = (r.array() > 0.0).select(1.0 / safe, 0.0);
        d_re = (ds.array() * c.array().square() - dc.array() * s.array() * c.array()) * inv_r +
               dr.array() * s.array();
        d_im = (dc.array() * s.array().square() - ds.array() * s.array() * c.array()) * inv_r +
               dr.array() * c.array();
    };

    Matrix d_re_a, d_im_a, d_re_b, d_im_b;
    back_to_projection(f.r_a, f.sin_a, f.cos_a, d_sin_a, d_cos_a, d_r_a, d_re_a, d_im_a);
    back_to_projection(f.r_b, f.sin_b, f.cos_b, d_sin_b, d_cos_b, d_r_b, d_re_b, d_im_b);

    // re_a = a * w_re^T  =>  dL/d w_re += d_re_a^T * a (and the b member)
    g.d_w_re.noalias() += d_re_a.transpose() * a;
    g.d_w_re.noalias() += d_re_b.transpose() * b;
    g.d_w_im.noalias() += d_im_a.transpose() * a;
    g.d_w_im.noalias() += d_im_b.transpose() * b;

    if (!g.d_w_re.allFinite() || !g.d_w_im.allFinite())
        throw NumericError("non-finite gradient entries");

    return BackwardResult{std::move(g), loss};
}

GradientSet finite_difference_gradients(const ComplexBasis& basis, const Matrix& a,
                                        const Matrix& b, int p, double h) {
    check_pair_batch(basis, a, b, p);
    ComplexBasis probe = basis;
    GradientSet g = GradientSet::zeros(basis.n_basis(), basis.n_input());
    for (Index j = 0; j < basis.n_basis(); ++j) {
        for (Index k = 0; k < basis.n_input(); ++k) {
            const double w0 = probe.w_re(j, k);
            probe.w_re(j, k) = w0 + h;
            const double up = forward_batch_loss(probe, a, b, p);
            probe.w_re(j, k) = w0 - h;
            const double down = forward_batch_loss(probe, a, b, p);
            probe.w_re(j, k) = w0;
            g.d_w_re(j, k) = (up - down) / (2.0 * h);
        }
    }
    for (Index j = 0; j < basis.n_basis(); ++j) {
        for (Index k = 0; k < basis.n_input(); ++k) {
            const double w0 = probe.w_im(j, k);
            probe.w_im(j, k) = w0 + h;
            const double up = forward_batch_loss(probe, a, b, p);
            probe.w_im(j, k) = w0 - h;
            const double down = forward_batch_loss(probe, a, b, p);
            probe.w_im(j, k) = w0;
            g.d_w_im(j, k) = (up - down) / (2.0 * h);
        }
    }
    return g;
}

GradientCheckReport check_gradients(const ComplexBasis& basis, const Matrix& a, const Matrix& b,
                                    int p, double h, double floor, bool negate_analytic) {
    const BackwardResult analytic = backward(basis, a, b, p);
    const GradientSet fd = finite_difference_gradients(basis, a, b, p, h);

    const auto block_err = [&](const Matrix& ga_in, const Matrix& gf) {
        Matrix ga = negate_analytic ? Matrix(-ga_in) : ga_in;
        double worst = 0.0;
        for (Index j = 0; j < ga.rows(); ++j) {
            for (Index k = 0; k < ga.cols(); ++k) {
                const double denom =
                    std::max({std::abs(ga(j, k)), std::abs(gf(j, k)), floor});
                worst = std::max(worst, std::abs(ga(j, k) - gf(j, k)) / denom);
            }
        }
        return worst;
    };

    GradientCheckReport report;
    report.max_rel_err_w_re = block_err(analytic.grads.d_w_re, fd.d_w_re);
    report.max_rel_err_w_im = block_err(analytic.grads.d_w_im, fd.d_w_im);
    return report;
}

} // namespace cae
