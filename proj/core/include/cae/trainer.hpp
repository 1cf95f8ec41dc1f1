#ifndef CAE_TRAINER_HPP
#define CAE_TRAINER_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cae/basis.hpp"
#include "cae/optimizer.hpp"
#include "cae/rng.hpp"
#include "cae/types.hpp"

namespace cae {

enum class NormMode { none, penalty, reset };

struct TrainConfig {
    int p_norm = 2;                     // exponent of the reconstruction error, 1 or 2
    double learning_rate = 1e-3;
    Index batch_size = 1000;
    Index epochs = 500;
    Index transforms_per_epoch = 100000;
    double dropout_p = 0.5;             // input dropout, training only
    NormMode norm_mode = NormMode::none;
    double lambda_mean = 1e-2;          // penalty mode weights
    double lambda_dev = 1e-2;
    double target_norm = 0.4;           // reset mode target
    std::uint64_t rng_seed = 0;
    OptimizerKind optimizer = OptimizerKind::adam;
    Index n_basis = 256;

    void validate() const; // throws ValidationError / ParameterError
};

/// Fills `a` and `b` with batch_size rows of a transformation pair batch.
/// Implementations must draw all randomness from the supplied Rng.
using PairSource = std::function<void(Index batch_size, Rng& rng, Matrix& a, Matrix& b)>;

struct TrainResult {
    ComplexBasis basis;
    std::vector<double> loss_history; // per-epoch mean loss
};

/// Runs epochs x (transforms_per_epoch / batch_size) optimizer steps.
/// Input dropout is applied to both pair members during training only; the
/// reconstruction targets are the clean pair members. The norm mode is applied
/// after every batch. Deterministic for a fixed config and pair source.
/// Throws NumericError with the epoch/step position if the loss goes
/// non-finite.
TrainResult train(const TrainConfig& config, Index n_input, const PairSource& pairs);

std::string to_string(NormMode mode);
std::string to_string(OptimizerKind kind);
NormMode norm_mode_from_string(const std::string& s);
OptimizerKind optimizer_from_string(const std::string& s);

} // namespace cae

#endif
