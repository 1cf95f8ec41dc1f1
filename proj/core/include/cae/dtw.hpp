#ifndef CAE_DTW_HPP
#define CAE_DTW_HPP

#include <filesystem>
#include <utility>
#include <vector>

#include "cae/feature_matrix.hpp"
#include "cae/types.hpp"

namespace cae {

/// Monotone alignment path between two frame sequences. Starts at (0, 0),
/// ends at (Ta-1, Tb-1), steps drawn from {(1,0), (0,1), (1,1)}.
struct WarpingPath {
    std::vector<std::pair<Index, Index>> pairs;
    double cost = 0.0;
};

enum class FrameDistance { cosine, euclidean };

/// Exact DTW over the full cost matrix; globally optimal for the step set.
/// Frames are rows of A and B. Default distance is the cosine distance
/// (zero-norm frames are at distance 1 from everything).
WarpingPath dtw(const Matrix& a, const Matrix& b, FrameDistance dist = FrameDistance::cosine);

/// FastDTW (Salvador & Chan): recursive halving by adjacent-frame averaging,
/// path projection, and DTW constrained to the projected corridor expanded by
/// `radius` (Chebyshev, in index space). Sequences no longer than radius + 2
/// are solved exactly.
WarpingPath fastdtw(const Matrix& a, const Matrix& b, Index radius,
                    FrameDistance dist = FrameDistance::cosine);

/// Reference alignment: event times in seconds, strictly increasing in the
/// first coordinate.
struct GroundTruthMap {
    std::vector<std::pair<double, double>> events;
};

/// CSV with two columns of seconds per line.
GroundTruthMap load_ground_truth_csv(const std::filesystem::path& path);

struct AlignmentReport {
    double q1_seconds = 0.0;
    double median_seconds = 0.0;
    double q3_seconds = 0.0;
    double rate_50ms = 0.0;
    double rate_250ms = 0.0;
    Index clamped_events = 0; // ground-truth events outside the path span
};

/// Interprets the path as a piecewise-linear map from a-time to b-time
/// (vertical runs collapse to their midpoint) and reports error quartiles and
/// the <= 50 ms / <= 250 ms rates over the ground-truth events.
AlignmentReport evaluate_alignment(const WarpingPath& path, double hop_a_seconds,
                                   double hop_b_seconds, const GroundTruthMap& gt);

/// b-time predicted for a query a-time under the path's piecewise-linear map.
/// Queries outside the span clamp to the path end values.
double map_time(const WarpingPath& path, double hop_a_seconds, double hop_b_seconds,
                double time_a);

/// Resample the time axis by linear interpolation to round(T/factor) frames;
/// the hop stays the same, so the content plays faster (factor > 1) or slower.
FeatureMatrix tempo_scale(const FeatureMatrix& fm, double factor);

/// True when the boundary, monotonicity and step-set invariants all hold for
/// sequences of the given lengths.
bool path_is_valid(const WarpingPath& path, Index len_a, Index len_b);

} // namespace cae

#endif
