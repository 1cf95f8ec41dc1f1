#include "cae/synth.hpp"

#include <cmath>
#include <numbers>

#include "cae/error.hpp"
#include "cae/rng.hpp"
#include "cae/transforms.hpp"

namespace cae {

namespace {

// Partial offsets in bins for a 24-bins-per-octave grid (octave, fifth, ...).
constexpr long kHarmonicOffsets[] = {0, 24, 38, 48, 56};
constexpr double kHarmonicGains[] = {1.0, 0.5, 0.33, 0.25, 0.2};

void add_note(Matrix& grid, Index onset, Index duration, Index base_bin, double velocity) {
    const Index t_end = std::min<Index>(grid.rows(), onset + duration);
    for (Index t = onset; t < t_end; ++t) {
        const double rel = static_cast<double>(t - onset);
        // 2-frame raised-cosine attack, then exponential decay
        const double attack = rel < 2.0 ? 0.5 - 0.5 * std::cos(std::numbers::pi * (rel + 1.0) / 2.0)
                                        : 1.0;
        const double env = attack * std::exp(-rel / 12.0);
        for (std::size_t h = 0; h < std::size(kHarmonicOffsets); ++h) {
            const Index bin = base_bin + kHarmonicOffsets[h];
            if (bin >= grid.cols())
                break;
            const double amp = velocity * env * kHarmonicGains[h];
            grid(t, bin) += amp;
            if (bin > 0)
                grid(t, bin - 1) += 0.3 * amp;
            if (bin + 1 < grid.cols())
                grid(t, bin + 1) += 0.3 * amp;
        }
    }
}

} // namespace

FeatureMatrix synth_cqt_like(const SynthOptions& options) {
    if (options.frames < 1 || options.bins < 1 || options.n_events < 1)
        throw ValidationError("synth_cqt_like needs frames, bins and n_events >= 1");

    Rng rng(options.seed);
    FeatureMatrix fm;
    fm.frame_hop_seconds = options.frame_hop_seconds;
    fm.meta = "synth_cqt_like(seed=" + std::to_string(options.seed) + ")";
    fm.values = Matrix::Zero(options.frames, options.bins);

    for (Index e = 0; e < options.n_events; ++e) {
        const Index onset = rng.uniform_int(0, std::max<long>(0, options.frames - 5));
        const Index duration = rng.uniform_int(4, 24);
        const Index base_bin = rng.uniform_int(1, std::max<long>(1, options.bins - 2));
        const double velocity = rng.uniform(0.5, 1.0);
        add_note(fm.values, onset, duration, base_bin, velocity);
    }

    if (options.plant) {
        const PlantedRepeat& pr = *options.plant;
        if (pr.length < 1 || pr.src_start < 0 || pr.dst_start < 0 ||
            pr.src_start + pr.length > options.frames || pr.dst_start + pr.length > options.frames)
            throw ValidationError("planted repeat does not fit into the matrix");
        const Matrix segment = fm.values.middleRows(pr.src_start, pr.length);
        fm.values.middleRows(pr.dst_start, pr.length) = pitch_shift(segment, pr.bin_shift);
    }
    return fm;
}

FeatureMatrix synth_cqt_like(std::uint64_t seed, Index frames, Index bins, Index n_events) {
    SynthOptions options;
    options.seed = seed;
    options.frames = frames;
    options.bins = bins;
    options.n_events = n_events;
    return synth_cqt_like(options);
}

} // namespace cae
