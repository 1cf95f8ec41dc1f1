#ifndef CAE_TRANSFORMS_HPP
#define CAE_TRANSFORMS_HPP

#include <string>

#include "cae/rng.hpp"
#include "cae/types.hpp"

namespace cae {

enum class TransformKind {
    circular_shift_1d, // exact permutation of a flat vector
    pitch_shift,       // frequency-bin shift of a T_n x F n-gram, zero fill
    time_shift,        // frame shift of a T_n x F n-gram, zero fill
    rotate_2d,         // bilinear rotation of an H x W image about its center
    compose            // pitch shift then time shift
};

/// Which transformation family to sample and over what parameter range.
/// Shift kinds use the integer interval [lo, hi]; rotate_2d draws angles
/// uniformly from [lo, hi). compose draws a pitch shift from [lo, hi] and a
/// time shift from [second_lo, second_hi].
struct TransformSpec {
    TransformKind kind = TransformKind::circular_shift_1d;
    double lo = 0.0;
    double hi = 0.0;
    double second_lo = 0.0;
    double second_hi = 0.0;
    Index frames = 0; // n-gram grid (pitch/time shift, compose)
    Index bins = 0;
    Index height = 0; // image grid (rotate_2d)
    Index width = 0;

    void validate(Index n_input) const;
    /// Number of sampled parameters per transform application (1 or 2).
    int arity() const { return kind == TransformKind::compose ? 2 : 1; }
};

/// y_i = x_(i-k mod N): content moves right by k. Exactly orthogonal.
Vector circular_shift_1d(const Vector& x, long k);

/// Shift every frame along the frequency axis by `bins`; vacated bins are
/// zero-filled. |bins| must be < F.
Matrix pitch_shift(const Matrix& ngram, long bins);

/// Shift frames along the time axis by `frames`, zero fill. |frames| < T_n.
Matrix time_shift(const Matrix& ngram, long frames);

/// Bilinear rotation about the image center ( (H-1)/2, (W-1)/2 ); samples
/// falling outside the source read as 0. theta = 0 is the bit-exact identity.
Matrix rotate_2d(const Matrix& img, double theta);

enum class PairScheme {
    anchored,        // (x, psi(x))
    double_transform // (psi_i(x), psi_j(psi_i(x)))
};

/// Batch of input pairs flattened to rows. params has one row per sample:
/// the parameters of the transform that produced `a` from the source followed
/// by the parameters of the transform that produced `b` from `a`
/// (2 or 4 columns depending on the transform arity).
struct TransformPairBatch {
    Matrix a;
    Matrix b;
    Matrix params;
};

/// Draws `batch` source rows from the dataset (uniformly, with replacement)
/// and applies the sampling scheme. Rows of `dataset` are flattened samples
/// compatible with the spec's grid.
TransformPairBatch sample_pair(const Matrix& dataset, const TransformSpec& spec,
                               PairScheme scheme, Index batch, Rng& rng);

/// Apply the spec's transform with explicit parameters to one flattened row.
Vector apply_transform(const Vector& row, const TransformSpec& spec, double p1, double p2 = 0.0);

std::string to_string(TransformKind kind);
TransformKind transform_kind_from_string(const std::string& s);

} // namespace cae

#endif
