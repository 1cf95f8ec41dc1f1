#ifndef CAE_LOSS_HPP
#define CAE_LOSS_HPP

#include "cae/basis.hpp"
#include "cae/types.hpp"

namespace cae {

/// Symmetric reconstruction error for one pair:
///   (1/N) sum_i |x_i - x_hat_i|^p + (1/N) sum_j |tx_j - tx_hat_j|^p,  p in {1, 2}.
double reconstruction_loss(const Vector& x, const Vector& x_hat, const Vector& tx,
                           const Vector& tx_hat, int p);

/// Forward pass over a batch of pairs (rows of a and b): projects both members,
/// swaps magnitudes, reconstructs both, and returns the mean symmetric
/// reconstruction loss. Used by backward() and by the finite-difference oracle.
double forward_batch_loss(const ComplexBasis& basis, const Matrix& a, const Matrix& b, int p);

struct BackwardResult {
    GradientSet grads;
    double loss = 0.0;
};

/// Mean loss over the batch and its analytic gradients w.r.t. w_re and w_im,
/// differentiated through projection, polar encoding, magnitude swap and both
/// reconstruction terms. Throws NumericError naming the batch index if an
/// intermediate value goes non-finite.
BackwardResult backward(const ComplexBasis& basis, const Matrix& a, const Matrix& b, int p);

/// Same as backward() but reconstructs toward separate target rows. The
/// trainer feeds dropped-out inputs while keeping the clean pair members as
/// targets (denoising form).
BackwardResult backward_with_targets(const ComplexBasis& basis, const Matrix& in_a,
                                     const Matrix& in_b, const Matrix& target_a,
                                     const Matrix& target_b, int p);

/// Central finite differences (step h) of forward_batch_loss w.r.t. every basis
/// entry. Independent of backward(); exposed through the check-grad command.
GradientSet finite_difference_gradients(const ComplexBasis& basis, const Matrix& a,
                                        const Matrix& b, int p, double h = 1e-5);

/// Max relative error between analytic and finite-difference gradients per
/// parameter block. Relative error of a pair (g, g_fd) is
/// |g - g_fd| / max(|g|, |g_fd|, floor).
struct GradientCheckReport {
    double max_rel_err_w_re = 0.0;
    double max_rel_err_w_im = 0.0;
    double max_rel_err() const { return std::max(max_rel_err_w_re, max_rel_err_w_im); }
};
GradientCheckReport check_gradients(const ComplexBasis& basis, const Matrix& a, const Matrix& b,
                                    int p, double h = 1e-5, double floor = 1e-6,
                                    bool negate_analytic = false);

} // namespace cae

#endif
