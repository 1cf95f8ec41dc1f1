#ifndef CAE_FEATURE_MATRIX_HPP
#define CAE_FEATURE_MATRIX_HPP

#include <filesystem>
#include <string>
#include <utility>

#include "cae/rng.hpp"
#include "cae/types.hpp"

namespace cae {

/// T x F matrix of time frames by feature bins, plus the frame hop in seconds.
struct FeatureMatrix {
    Matrix values;                    // T x F
    double frame_hop_seconds = 1.0;
    std::string meta;

    Index frames() const { return values.rows(); }
    Index bins() const { return values.cols(); }
};

/// Per-column mean and standard deviation, std floored at 1e-8.
struct StandardizationStats {
    Vector mean;
    Vector std;
};

/// Loads either a CSV file (one frame per row) or the "FTM1" binary container,
/// sniffing the magic bytes. Throws FormatError with a line/byte position on
/// malformed input.
FeatureMatrix load_feature_matrix(const std::filesystem::path& path);

/// "FTM1" little-endian binary: magic, u32 T, u32 F, f64 hop_seconds,
/// then T*F f64 row-major.
void save_feature_matrix_ftm(const std::filesystem::path& path, const FeatureMatrix& fm);
void save_feature_matrix_csv(const std::filesystem::path& path, const FeatureMatrix& fm);

/// Fit per-column stats over all frames and return the standardized copy.
std::pair<Matrix, StandardizationStats> standardize(const Matrix& x);

/// Apply existing stats (evaluation data path).
Matrix standardize(const Matrix& x, const StandardizationStats& stats);

/// Consecutive n-frame windows starting at 0, hop, 2*hop, ..., each flattened
/// time-major so element (t, f) lands at index t*F + f. Row count is
/// floor((T - n)/hop) + 1. Throws ValidationError when T < n.
Matrix ngram_slice(const Matrix& x, Index n, Index hop_frames);

/// Inverted dropout: zero each element with probability p, scale survivors by
/// 1/(1-p). Expectation-preserving; training-time only.
Vector input_dropout(const Vector& x, double p, Rng& rng);

/// Row-major in-place variant for whole batches.
void input_dropout_inplace(Matrix& rows, double p, Rng& rng);

} // namespace cae

#endif
