#ifndef CAE_TEST_SUPPORT_HPP
#define CAE_TEST_SUPPORT_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cae/dataset.hpp"
#include "cae/rng.hpp"
#include "cae/types.hpp"

namespace cae::testsupport {

/// Unique scratch directory, removed on destruction.
struct TempDir {
    std::filesystem::path path;
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

// ---- independent oracles -------------------------------------------------
// These evaluate reference quantities directly, without going through the
// library code paths they are used to check.

/// |DFT(x)|_j with the unitary 1/sqrt(N) scaling, evaluated by direct
/// summation.
Vector dft_magnitudes_direct(const Vector& x);

/// Phase of the j-th unitary DFT coefficient under the convention
/// phi = atan2(real, imag), in [0, 2*pi).
Vector dft_phases_direct(const Vector& x);

/// Real/imaginary parts of the unitary DFT by direct summation.
void dft_direct(const Vector& x, Vector& re, Vector& im);

/// Minimal-cost DTW value by memoized recursion over the step set
/// {(1,0),(0,1),(1,1)} (no path, cost only). Cost of cell (i, j) uses the
/// provided dense distance matrix.
double dtw_cost_recursive(const Matrix& frame_dist);

/// Dense pairwise cosine distances between rows of a and b.
Matrix cosine_distance_matrix(const Matrix& a, const Matrix& b);

// ---- data generators -------------------------------------------------

/// Rows are length-n signals: sums of the first max_harmonic Fourier modes
/// with random amplitudes and phases. Deterministic per seed.
Matrix random_smooth_signals(Index count, Index n, Index max_harmonic, std::uint64_t seed);

/// Random dense matrix with standard normal entries.
Matrix random_normal_matrix(Index rows, Index cols, std::uint64_t seed);

/// Smooth random walk sequences (rows = frames) for alignment tests.
Matrix random_walk_frames(Index frames, Index dims, std::uint64_t seed);

// ---- synthetic glyph images -------------------------------------------------
// Ten rigid 28x28 glyph templates built from rings, disks and spokes. Each
// class is a rigid arrangement, so any two instances of a class differ only by
// rotation plus mild jitter; classes differ in spoke pattern, core shape and
// marker radius. Stand-in for rotated digit data at desk scale.

struct GlyphOptions {
    Index size = 28;
    double noise = 0.04;
    bool rotate = true; // apply a random rotation in [0, 2*pi)
};

LabeledImages make_glyphs(Index per_class, std::uint64_t seed, const GlyphOptions& options = {});

/// Rotation angles applied to each glyph (empty when options.rotate is false).
LabeledImages make_glyphs(Index per_class, std::uint64_t seed, const GlyphOptions& options,
                          std::vector<double>& angles_out);

} // namespace cae::testsupport

#endif
