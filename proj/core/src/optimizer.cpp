#include "cae/optimizer.hpp"

#include <cmath>

#include "cae/error.hpp"

namespace cae {

Optimizer::Optimizer(OptimizerKind kind, double learning_rate) : kind_(kind), lr_(learning_rate) {
    if (!(learning_rate > 0.0))
        throw ParameterError("learning rate must be positive");
}

void Optimizer::reset() {
    t_ = 0;
    m_re_.resize(0, 0);
    v_re_.resize(0, 0);
    m_im_.resize(0, 0);
    v_im_.resize(0, 0);
}

void Optimizer::step(ComplexBasis& basis, const GradientSet& grads) {
    if (grads.d_w_re.rows() != basis.w_re.rows() || grads.d_w_re.cols() != basis.w_re.cols() ||
        grads.d_w_im.rows() != basis.w_im.rows() || grads.d_w_im.cols() != basis.w_im.cols())
        throw ShapeError("gradient shapes do not match basis");

    if (kind_ == OptimizerKind::sgd) {
        basis.w_re -= lr_ * grads.d_w_re;
        basis.w_im -= lr_ * grads.d_w_im;
        ++t_;
        return;
    }

    if (t_ == 0) {
        m_re_ = Matrix::Zero(basis.w_re.rows(), basis.w_re.cols());
        v_re_ = m_re_;
        m_im_ = m_re_;
        v_im_ = m_re_;
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));

    const auto update = [&](Matrix& w, Matrix& m, Matrix& v, const Matrix& g) {
        m = beta1_ * m + (1.0 - beta1_) * g;
        v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
        w.array() -= lr_ * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps_);
    };
    update(basis.w_re, m_re_, v_re_, grads.d_w_re);
    update(basis.w_im, m_im_, v_im_, grads.d_w_im);
}

} // namespace cae
