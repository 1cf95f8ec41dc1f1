#include "cae/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "cae/error.hpp"

namespace cae {

namespace {
constexpr double kEps = 1e-8; // caps reciprocal similarity at 1e8
}

SimilarityMatrix self_similarity(const Matrix& features, double frame_hop_seconds) {
    const Index k = features.rows();
    if (k < 2)
        throw ValidationError("need at least 2 feature rows for a self-similarity matrix");

    const Vector norms = features.rowwise().norm();
    Matrix unit = features;
    for (Index i = 0; i < k; ++i) {
        if (norms[i] > 0.0)
            unit.row(i) /= norms[i];
        else
            unit.row(i).setZero(); // zero rows: cosine distance 1 against everything
    }

    SimilarityMatrix s;
    s.frame_hop_seconds = frame_hop_seconds;
    Matrix cos_sim = unit * unit.transpose();
    cos_sim = ((cos_sim + cos_sim.transpose()) * 0.5).eval(); // exact symmetry
    s.values = (1.0 / ((1.0 - cos_sim.array()).max(0.0) + kEps)).matrix();
    return s;
}

SimilarityMatrix diagonal_smooth(const SimilarityMatrix& s, Index k) {
    if (k < 1)
        throw ValidationError("kernel size must be >= 1");
    const Index n = s.size();
    if (k > n)
        throw ValidationError("kernel size " + std::to_string(k) +
                              " exceeds matrix size " + std::to_string(n));
    if (k == 1)
        return s;

    SimilarityMatrix out;
    out.frame_hop_seconds = s.frame_hop_seconds;
    const Index m = n - k + 1;
    out.values.resize(m, m);
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < m; ++j) {
            double acc = 0.0;
            for (Index t = 0; t < k; ++t)
                acc += s.values(i + t, j + t);
            out.values(i, j) = acc;
        }
    }
    return out;
}

SimilarityMatrix postprocess(const SimilarityMatrix& s) {
    if (s.values.rows() != s.values.cols())
        throw ShapeError("similarity matrix must be square");
    SimilarityMatrix out = s;
    out.values.diagonal().setZero();

    const double max_abs = out.values.array().abs().maxCoeff();
    if (max_abs == 0.0)
        return out;
    out.values /= max_abs;

    std::vector<double> flat(out.values.data(), out.values.data() + out.values.size());
    const std::size_t mid = flat.size() / 2;
    std::nth_element(flat.begin(), flat.begin() + mid, flat.end());
    double median = flat[mid];
    if (flat.size() % 2 == 0) {
        std::nth_element(flat.begin(), flat.begin() + mid - 1, flat.begin() + mid);
        median = 0.5 * (median + flat[mid - 1]);
    }
    out.values.array() -= median;
    return out;
}

std::vector<RepeatedSection> find_diagonals(const SimilarityMatrix& s, double threshold,
                                            Index min_length, Index max_gap) {
    if (s.values.rows() != s.values.cols())
        throw ShapeError("similarity matrix must be square");
    if (min_length < 1)
        throw ValidationError("min_length must be >= 1");
    const Index n = s.size();

    std::vector<RepeatedSection> sections;
    for (Index lag = 1; lag < n; ++lag) {
        const Index diag_len = n - lag;
        Index run_start = -1;
        Index run_end = -1; // inclusive index of the last above-threshold cell
        const auto flush = [&]() {
            if (run_start < 0)
                return;
            const Index span = run_end - run_start + 1;
            if (span >= min_length) {
                RepeatedSection sec;
                sec.a_start = run_start;
                sec.a_end = run_end + 1;
                sec.b_start = run_start + lag;
                sec.b_end = run_end + 1 + lag;
                double acc = 0.0;
                for (Index t = run_start; t <= run_end; ++t)
                    acc += s.values(t, t + lag);
                sec.score = acc / static_cast<double>(span);
                sections.push_back(sec);
            }
            run_start = run_end = -1;
        };
        for (Index i = 0; i < diag_len; ++i) {
            if (s.values(i, i + lag) > threshold) {
                if (run_start < 0)
                    run_start = i;
                run_end = i;
            } else if (run_start >= 0 && i - run_end > max_gap) {
                flush();
            }
        }
        flush();
    }
    std::stable_sort(sections.begin(), sections.end(),
                     [](const RepeatedSection& x, const RepeatedSection& y) {
                         return x.score > y.score;
                     });
    return sections;
}

namespace {

double interval_iou(Index s1, Index e1, Index s2, Index e2) {
    const Index inter = std::max<Index>(0, std::min(e1, e2) - std::max(s1, s2));
    const Index uni = std::max(e1, e2) - std::min(s1, s2);
    return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

} // namespace

double section_iou(const RepeatedSection& x, const RepeatedSection& y) {
    return std::min(interval_iou(x.a_start, x.a_end, y.a_start, y.a_end),
                    interval_iou(x.b_start, x.b_end, y.b_start, y.b_end));
}

OverlapReport evaluate_overlap(const std::vector<RepeatedSection>& found,
                               const std::vector<RepeatedSection>& ground_truth,
                               double iou_threshold) {
    if (iou_threshold <= 0.0 || iou_threshold > 1.0)
        throw ParameterError("iou_threshold must lie in (0, 1]");
    if (ground_truth.empty())
        throw ValidationError("ground truth is empty; recall is undefined");

    std::vector<bool> taken(ground_truth.size(), false);
    Index matched = 0;
    for (const RepeatedSection& f : found) {
        double best = 0.0;
        Index best_idx = -1;
        for (std::size_t g = 0; g < ground_truth.size(); ++g) {
            if (taken[g])
                continue;
            const double iou = section_iou(f, ground_truth[g]);
            if (iou >= iou_threshold && iou > best) {
                best = iou;
                best_idx = static_cast<Index>(g);
            }
        }
        if (best_idx >= 0) {
            taken[static_cast<std::size_t>(best_idx)] = true;
            ++matched;
        }
    }

    OverlapReport report;
    report.precision = found.empty()
                           ? 1.0
                           : static_cast<double>(matched) / static_cast<double>(found.size());
    report.recall = static_cast<double>(matched) / static_cast<double>(ground_truth.size());
    report.f1 = (report.precision + report.recall) > 0.0
                    ? 2.0 * report.precision * report.recall / (report.precision + report.recall)
                    : 0.0;
    return report;
}

} // namespace cae
