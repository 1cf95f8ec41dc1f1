#ifndef CAE_BASIS_HPP
#define CAE_BASIS_HPP

#include "cae/rng.hpp"
#include "cae/types.hpp"

namespace cae {

/// A learnable set of M complex basis vectors over R^N, stored as the real
/// and imaginary parts of the complex M x N matrix W = w_re + i*w_im.
struct ComplexBasis {
    Matrix w_re; // M x N
    Matrix w_im; // M x N

    Index n_basis() const { return w_re.rows(); }
    Index n_input() const { return w_re.cols(); }

    /// Entries i.i.d. uniform in [-1/sqrt(N), 1/sqrt(N)].
    static ComplexBasis random_init(Index n_basis, Index n_input, Rng& rng);

    /// Complex row norms sqrt(||w_re_j||^2 + ||w_im_j||^2), length M.
    Vector row_norms() const;
};

/// The analytic DFT basis for R^N (M = N): row j holds cos(2*pi*j*k/N)/sqrt(N)
/// in the real part and -sin(2*pi*j*k/N)/sqrt(N) in the imaginary part. This
/// is a unitary complex matrix that diagonalises circular shift, so magnitudes
/// under it are exactly shift-invariant.
ComplexBasis dft_basis(Index n);

/// Polar form of one projected sample: phase in [0, 2*pi)^M, magnitude >= 0.
struct PolarCode {
    Vector phase;
    Vector magnitude;
};

/// Gradients with respect to a ComplexBasis, same shapes.
struct GradientSet {
    Matrix d_w_re;
    Matrix d_w_im;

    static GradientSet zeros(Index n_basis, Index n_input);
};

/// re = w_re * x, im = w_im * x.
void project(const ComplexBasis& basis, const Vector& x, Vector& re, Vector& im);

/// Batch variant: rows of x_rows are samples; re/im come back as B x M.
void project(const ComplexBasis& basis, const Matrix& x_rows, Matrix& re, Matrix& im);

/// r_j = sqrt(re_j^2 + im_j^2), phi_j = atan2(re_j, im_j) mapped into [0, 2*pi).
/// Note the argument order: the convention throughout is re = r*sin(phi),
/// im = r*cos(phi).
PolarCode polar_encode(const Vector& re, const Vector& im);

/// w_re^T (magnitude_other .* sin(phase_own)) + w_im^T (magnitude_other .* cos(phase_own)).
Vector reconstruct_swapped(const ComplexBasis& basis, const Vector& phase_own,
                           const Vector& magnitude_other);

/// Magnitude part of the polar code for each row of x_rows; result is B x M.
/// Safe for concurrent use on an immutable basis.
Matrix magnitude_features(const ComplexBasis& basis, const Matrix& x_rows);

/// Element-wise phase difference phi_x - phi_y wrapped into (-pi, pi].
Vector phase_difference(const ComplexBasis& basis, const Vector& x, const Vector& y);

/// Rescale every complex row to the exact target norm. Throws NumericError on
/// a row with zero norm.
void renormalize_basis(ComplexBasis& basis, double target_norm);

/// Norm regulariser: lambda_mean * mean_j(norm_j)
///                 + lambda_dev  * mean_j((norm_j - mean_norm)^2),
/// together with its gradients.
struct NormPenalty {
    double value = 0.0;
    GradientSet grads;
};
NormPenalty norm_penalty(const ComplexBasis& basis, double lambda_mean, double lambda_dev);

/// Wrap an angle into (-pi, pi].
double wrap_angle(double a);

} // namespace cae

#endif
