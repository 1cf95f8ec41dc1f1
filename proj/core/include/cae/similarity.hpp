#ifndef CAE_SIMILARITY_HPP
#define CAE_SIMILARITY_HPP

#include <vector>

#include "cae/types.hpp"

namespace cae {

/// Dense K x K self-similarity scores over n-gram features.
struct SimilarityMatrix {
    Matrix values;
    double frame_hop_seconds = 1.0;

    Index size() const { return values.rows(); }
};

/// S_ij = 1 / (d_cos(f_i, f_j) + 1e-8) with d_cos = 1 - cosine similarity.
/// All-zero feature rows get d_cos = 1 against everything.
SimilarityMatrix self_similarity(const Matrix& features, double frame_hop_seconds = 1.0);

/// Valid-mode correlation with the k x k identity kernel: output cell (i, j)
/// sums S(i+t, j+t) for t in [0, k). Output is (K-k+1) square; index i still
/// names the n-gram start of the window's first cell.
SimilarityMatrix diagonal_smooth(const SimilarityMatrix& s, Index k);

/// Zero the main diagonal, divide by the max absolute entry, subtract the
/// median of all entries. An all-zero matrix passes through unchanged.
SimilarityMatrix postprocess(const SimilarityMatrix& s);

/// One repeated section: two occurrences as half-open n-gram index intervals.
struct RepeatedSection {
    Index a_start = 0;
    Index a_end = 0; // exclusive
    Index b_start = 0;
    Index b_end = 0;
    double score = 0.0;

    Index lag() const { return b_start - a_start; }
    Index length() const { return a_end - a_start; }
};

/// Scans every super-diagonal (lag >= 1) for runs of entries above the
/// threshold; runs separated by at most max_gap sub-threshold cells are
/// merged. Runs spanning at least min_length cells become sections with
/// score = mean entry over the merged span, sorted by descending score.
std::vector<RepeatedSection> find_diagonals(const SimilarityMatrix& s, double threshold,
                                            Index min_length, Index max_gap);

struct OverlapReport {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Greedy one-to-one matching of found sections to ground truth by interval
/// IoU (the smaller of the two occurrence IoUs must reach iou_threshold).
/// Empty found list scores precision 1 by convention. Empty ground truth is a
/// ValidationError.
OverlapReport evaluate_overlap(const std::vector<RepeatedSection>& found,
                               const std::vector<RepeatedSection>& ground_truth,
                               double iou_threshold);

/// IoU of the two occurrence-interval pairs (min over the a and b intervals).
double section_iou(const RepeatedSection& x, const RepeatedSection& y);

} // namespace cae

#endif
