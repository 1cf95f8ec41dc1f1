#include "cae/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "cae/error.hpp"

namespace cae {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rows normalized to unit length; zero rows stay zero so their cosine
// similarity against anything is 0 (distance 1).
Matrix unit_rows(const Matrix& x) {
    Matrix u = x;
    for (Index i = 0; i < u.rows(); ++i) {
        const double n = u.row(i).norm();
        if (n > 0.0)
            u.row(i) /= n;
    }
    return u;
}

struct FrameMetric {
    const Matrix& a;
    const Matrix& b;
    FrameDistance kind;
    Matrix ua, ub; // unit rows, cosine only

    FrameMetric(const Matrix& a_, const Matrix& b_, FrameDistance kind_)
        : a(a_), b(b_), kind(kind_) {
        if (kind == FrameDistance::cosine) {
            ua = unit_rows(a);
            ub = unit_rows(b);
        }
    }

    double operator()(Index i, Index j) const {
        if (kind == FrameDistance::cosine)
            return std::max(0.0, 1.0 - ua.row(i).dot(ub.row(j)));
        return (a.row(i) - b.row(j)).norm();
    }
};

// Per-row column window [lo, hi], both inclusive.
struct Window {
    std::vector<Index> lo, hi;
};

Window full_window(Index rows, Index cols) {
    Window w;
    w.lo.assign(static_cast<std::size_t>(rows), 0);
    w.hi.assign(static_cast<std::size_t>(rows), cols - 1);
    return w;
}

// Cost/backtrack storage restricted to the window, rows packed contiguously.
class Lattice {
public:
    Lattice(const Window& w) : lo_(w.lo), offsets_(w.lo.size() + 1, 0) {
        for (std::size_t r = 0; r < w.lo.size(); ++r)
            offsets_[r + 1] = offsets_[r] + static_cast<std::size_t>(w.hi[r] - w.lo[r] + 1);
        cells_.assign(offsets_.back(), kInf);
        hi_ = w.hi;
    }

    bool contains(Index r, Index c) const {
        return r >= 0 && r < static_cast<Index>(lo_.size()) && c >= lo_[r] && c <= hi_[r];
    }
    double get(Index r, Index c) const {
        return contains(r, c) ? cells_[index(r, c)] : kInf;
    }
    void set(Index r, Index c, double v) { cells_[index(r, c)] = v; }
    Index row_lo(Index r) const { return lo_[r]; }
    Index row_hi(Index r) const { return hi_[r]; }

private:
    std::size_t index(Index r, Index c) const {
        return offsets_[static_cast<std::size_t>(r)] + static_cast<std::size_t>(c - lo_[r]);
    }
    std::vector<Index> lo_, hi_;
    std::vector<std::size_t> offsets_;
    std::vector<double> cells_;
};

WarpingPath dtw_in_window(const Matrix& a, const Matrix& b, const Window& w,
                          const FrameMetric& dist) {
    const Index n = a.rows();
    const Index m = b.rows();
    Lattice acc(w);

    for (Index i = 0; i < n; ++i) {
        for (Index j = acc.row_lo(i); j <= acc.row_hi(i); ++j) {
            const double d = dist(i, j);
            if (i == 0 && j == 0) {
                acc.set(i, j, d);
                continue;
            }
            const double best =
                std::min({acc.get(i - 1, j - 1), acc.get(i - 1, j), acc.get(i, j - 1)});
            acc.set(i, j, best == kInf ? kInf : best + d);
        }
    }
    if (acc.get(n - 1, m - 1) == kInf)
        throw NumericError("alignment window disconnected; no feasible path");

    WarpingPath path;
    path.cost = acc.get(n - 1, m - 1);
    Index i = n - 1, j = m - 1;
    path.pairs.emplace_back(i, j);
    while (i > 0 || j > 0) {
        const double diag = acc.get(i - 1, j - 1);
        const double up = acc.get(i - 1, j);
        const double left = acc.get(i, j - 1);
        const double best = std::min({diag, up, left});
        if (diag == best) {
            --i;
            --j;
        } else if (up == best) {
            --i;
        } else {
            --j;
        }
        path.pairs.emplace_back(i, j);
    }
    std::reverse(path.pairs.begin(), path.pairs.end());
    return path;
}

void check_alignment_inputs(const Matrix& a, const Matrix& b) {
    if (a.rows() < 1 || b.rows() < 1)
        throw ValidationError("cannot align empty sequences");
    if (a.cols() != b.cols()) {
        std::ostringstream os;
        os << "frame dimensionalities differ: " << a.cols() << " vs " << b.cols();
        throw ShapeError(os.str());
    }
}

// Average adjacent frame pairs; an odd trailing frame is kept as-is.
Matrix halve(const Matrix& x) {
    const Index n = (x.rows() + 1) / 2;
    Matrix out(n, x.cols());
    for (Index i = 0; i < n; ++i) {
        if (2 * i + 1 < x.rows())
            out.row(i) = 0.5 * (x.row(2 * i) + x.row(2 * i + 1));
        else
            out.row(i) = x.row(2 * i);
    }
    return out;
}

// Project the coarse path to fine resolution and expand by a Chebyshev radius.
Window expand_window(const std::vector<std::pair<Index, Index>>& coarse_path, Index rows,
                     Index cols, Index radius) {
    std::vector<Index> base_lo(static_cast<std::size_t>(rows), cols);
    std::vector<Index> base_hi(static_cast<std::size_t>(rows), -1);
    const auto mark = [&](Index r, Index c) {
        if (r < 0 || r >= rows)
            return;
        const Index cc = std::clamp<Index>(c, 0, cols - 1);
        base_lo[r] = std::min(base_lo[r], cc);
        base_hi[r] = std::max(base_hi[r], cc);
    };
    for (const auto& [ci, cj] : coarse_path) {
        for (Index dr = 0; dr < 2; ++dr)
            for (Index dc = 0; dc < 2; ++dc)
                mark(2 * ci + dr, 2 * cj + dc);
    }
    // rows with no projected cell inherit neighbours via the radius sweep below;
    // seed them from the nearest marked row to stay connected
    for (Index r = 1; r < rows; ++r) {
        if (base_hi[r] < 0) {
            base_lo[r] = base_lo[r - 1];
            base_hi[r] = base_hi[r - 1];
        }
    }
    for (Index r = rows - 2; r >= 0; --r) {
        if (base_hi[r] < 0) {
            base_lo[r] = base_lo[r + 1];
            base_hi[r] = base_hi[r + 1];
        }
    }

    Window w;
    w.lo.assign(static_cast<std::size_t>(rows), 0);
    w.hi.assign(static_cast<std::size_t>(rows), cols - 1);
    for (Index r = 0; r < rows; ++r) {
        Index lo = cols, hi = -1;
        for (Index rr = std::max<Index>(0, r - radius);
             rr <= std::min<Index>(rows - 1, r + radius); ++rr) {
            lo = std::min(lo, base_lo[rr]);
            hi = std::max(hi, base_hi[rr]);
        }
        w.lo[r] = std::max<Index>(0, lo - radius);
        w.hi[r] = std::min<Index>(cols - 1, hi + radius);
    }
    return w;
}

WarpingPath fastdtw_recursive(const Matrix& a, const Matrix& b, Index radius,
                              FrameDistance dist) {
    const Index min_size = radius + 2;
    if (a.rows() <= min_size || b.rows() <= min_size)
        return dtw(a, b, dist);

    const Matrix a_half = halve(a);
    const Matrix b_half = halve(b);
    const WarpingPath coarse = fastdtw_recursive(a_half, b_half, radius, dist);
    const Window w = expand_window(coarse.pairs, a.rows(), b.rows(), radius);
    const FrameMetric metric(a, b, dist);
    return dtw_in_window(a, b, w, metric);
}

} // namespace

WarpingPath dtw(const Matrix& a, const Matrix& b, FrameDistance dist) {
    check_alignment_inputs(a, b);
    const FrameMetric metric(a, b, dist);
    return dtw_in_window(a, b, full_window(a.rows(), b.rows()), metric);
}

WarpingPath fastdtw(const Matrix& a, const Matrix& b, Index radius, FrameDistance dist) {
    check_alignment_inputs(a, b);
    if (radius < 0)
        throw ParameterError("radius must be >= 0");
    return fastdtw_recursive(a, b, radius, dist);
}

GroundTruthMap load_ground_truth_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open " + path.string());
    GroundTruthMap gt;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string cell_a, cell_b;
        if (!std::getline(ss, cell_a, ',') || !std::getline(ss, cell_b, ','))
            throw FormatError(path.string() + ": expected two columns at line " +
                              std::to_string(line_no));
        try {
            gt.events.emplace_back(std::stod(cell_a), std::stod(cell_b));
        } catch (const std::exception&) {
            throw FormatError(path.string() + ": bad number at line " + std::to_string(line_no));
        }
    }
    if (gt.events.empty())
        throw FormatError(path.string() + ": no events");
    for (std::size_t i = 1; i < gt.events.size(); ++i)
        if (gt.events[i].first <= gt.events[i - 1].first)
            throw ValidationError(path.string() + ": event times must be strictly increasing (line " +
                                  std::to_string(i + 1) + ")");
    return gt;
}

namespace {

// Path as a strictly increasing polyline: one knot per distinct a-index, the
// b value being the midpoint of that index's run.
std::vector<std::pair<double, double>> path_knots(const WarpingPath& path, double hop_a,
                                                  double hop_b) {
    std::vector<std::pair<double, double>> knots;
    std::size_t k = 0;
    while (k < path.pairs.size()) {
        const Index i = path.pairs[k].first;
        Index j_min = path.pairs[k].second;
        Index j_max = j_min;
        while (k < path.pairs.size() && path.pairs[k].first == i) {
            j_min = std::min(j_min, path.pairs[k].second);
            j_max = std::max(j_max, path.pairs[k].second);
            ++k;
        }
        knots.emplace_back(static_cast<double>(i) * hop_a,
                           0.5 * static_cast<double>(j_min + j_max) * hop_b);
    }
    return knots;
}

double interpolate(const std::vector<std::pair<double, double>>& knots, double x) {
    if (x <= knots.front().first)
        return knots.front().second;
    if (x >= knots.back().first)
        return knots.back().second;
    const auto it = std::upper_bound(knots.begin(), knots.end(), x,
                                     [](double v, const auto& kn) { return v < kn.first; });
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    const double t = (x - x0) / (x1 - x0);
    return y0 + t * (y1 - y0);
}

double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.size() == 1)
        return sorted.front();
    const double h = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - std::floor(h);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

double map_time(const WarpingPath& path, double hop_a_seconds, double hop_b_seconds,
                double time_a) {
    if (path.pairs.empty())
        throw ValidationError("empty warping path");
    return interpolate(path_knots(path, hop_a_seconds, hop_b_seconds), time_a);
}

AlignmentReport evaluate_alignment(const WarpingPath& path, double hop_a_seconds,
                                   double hop_b_seconds, const GroundTruthMap& gt) {
    if (gt.events.empty())
        throw ValidationError("ground truth is empty");
    if (path.pairs.empty())
        throw ValidationError("empty warping path");

    const auto knots = path_knots(path, hop_a_seconds, hop_b_seconds);
    AlignmentReport report;
    std::vector<double> errors;
    errors.reserve(gt.events.size());
    for (const auto& [ta, tb] : gt.events) {
        if (ta < knots.front().first || ta > knots.back().first)
            ++report.clamped_events;
        errors.push_back(std::abs(interpolate(knots, ta) - tb));
    }
    std::sort(errors.begin(), errors.end());
    report.q1_seconds = quantile(errors, 0.25);
    report.median_seconds = quantile(errors, 0.5);
    report.q3_seconds = quantile(errors, 0.75);
    const double n = static_cast<double>(errors.size());
    report.rate_50ms =
        static_cast<double>(std::count_if(errors.begin(), errors.end(),
                                          [](double e) { return e <= 0.050 + 1e-12; })) / n;
    report.rate_250ms =
        static_cast<double>(std::count_if(errors.begin(), errors.end(),
                                          [](double e) { return e <= 0.250 + 1e-12; })) / n;
    return report;
}

FeatureMatrix tempo_scale(const FeatureMatrix& fm, double factor) {
    if (!(factor > 0.0))
        throw ParameterError("tempo factor must be positive");
    const Index t_in = fm.frames();
    const Index t_out = static_cast<Index>(std::llround(static_cast<double>(t_in) / factor));
    if (t_out < 2)
        throw ValidationError("tempo-scaled sequence would have fewer than 2 frames");

    FeatureMatrix out;
    out.frame_hop_seconds = fm.frame_hop_seconds;
    out.meta = fm.meta;
    out.values.resize(t_out, fm.bins());
    const double scale = static_cast<double>(t_in - 1) / static_cast<double>(t_out - 1);
    for (Index t = 0; t < t_out; ++t) {
        const double u = static_cast<double>(t) * scale;
        const Index lo = std::min<Index>(static_cast<Index>(std::floor(u)), t_in - 1);
        const Index hi = std::min<Index>(lo + 1, t_in - 1);
        const double frac = u - std::floor(u);
        out.values.row(t) = (1.0 - frac) * fm.values.row(lo) + frac * fm.values.row(hi);
    }
    return out;
}

bool path_is_valid(const WarpingPath& path, Index len_a, Index len_b) {
    if (path.pairs.empty())
        return false;
    if (path.pairs.front() != std::pair<Index, Index>{0, 0})
        return false;
    if (path.pairs.back() != std::pair<Index, Index>{len_a - 1, len_b - 1})
        return false;
    for (std::size_t k = 1; k < path.pairs.size(); ++k) {
        const Index di = path.pairs[k].first - path.pairs[k - 1].first;
        const Index dj = path.pairs[k].second - path.pairs[k - 1].second;
        const bool step_ok = (di == 1 && dj == 0) || (di == 0 && dj == 1) || (di == 1 && dj == 1);
        if (!step_ok)
            return false;
    }
    return true;
}

} // namespace cae
