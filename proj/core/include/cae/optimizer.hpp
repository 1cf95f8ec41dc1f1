#ifndef CAE_OPTIMIZER_HPP
#define CAE_OPTIMIZER_HPP

#include "cae/basis.hpp"
#include "cae/types.hpp"

namespace cae {

enum class OptimizerKind { adam, sgd };

/// Gradient-descent step rule applied in place to a ComplexBasis.
/// Adam uses beta1 = 0.9, beta2 = 0.999, eps = 1e-8 with bias correction;
/// sgd is plain w -= lr * g (kept for tests).
class Optimizer {
public:
    Optimizer(OptimizerKind kind, double learning_rate);

    void step(ComplexBasis& basis, const GradientSet& grads);
    void reset();

    OptimizerKind kind() const { return kind_; }
    long step_count() const { return t_; }

private:
    OptimizerKind kind_;
    double lr_;
    double beta1_ = 0.9;
    double beta2_ = 0.999;
    double eps_ = 1e-8;
    long t_ = 0;
    Matrix m_re_, v_re_, m_im_, v_im_;
};

} // namespace cae

#endif
