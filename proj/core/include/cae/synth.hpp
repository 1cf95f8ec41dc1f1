#ifndef CAE_SYNTH_HPP
#define CAE_SYNTH_HPP

#include <cstdint>
#include <optional>

#include "cae/feature_matrix.hpp"
#include "cae/types.hpp"

namespace cae {

/// Overwrite frames [dst, dst+length) with a bin-shifted exact copy of frames
/// [src, src+length) after generation, so a known transposed repetition exists.
struct PlantedRepeat {
    Index src_start = 0;
    Index dst_start = 0;
    Index length = 0;
    long bin_shift = 0;
};

struct SynthOptions {
    std::uint64_t seed = 0;
    Index frames = 256;
    Index bins = 24;
    Index n_events = 24;
    double frame_hop_seconds = 0.08998; // hop 1984 samples at 22.05 kHz
    std::optional<PlantedRepeat> plant;
};

/// Deterministic CQT-like spectrogram: harmonic note stacks at integer bin
/// offsets with smooth onset/decay envelopes, so a frequency-bin shift is a
/// faithful stand-in for transposition. All values are non-negative.
FeatureMatrix synth_cqt_like(const SynthOptions& options);

FeatureMatrix synth_cqt_like(std::uint64_t seed, Index frames, Index bins, Index n_events);

} // namespace cae

#endif
