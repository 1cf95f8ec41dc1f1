#include "cae/trainer.hpp"

#include <cmath>
#include <sstream>

#include "cae/error.hpp"
#include "cae/feature_matrix.hpp"
#include "cae/loss.hpp"

namespace cae {

void TrainConfig::validate() const {
    if (p_norm != 1 && p_norm != 2)
        throw ParameterError("p_norm must be 1 or 2");
    if (!(learning_rate > 0.0))
        throw ParameterError("learning_rate must be positive");
    if (batch_size < 1)
        throw ValidationError("batch_size must be >= 1");
    if (epochs < 0)
        throw ValidationError("epochs must be >= 0");
    if (epochs > 0 && transforms_per_epoch < batch_size)
        throw ValidationError("transforms_per_epoch must be >= batch_size");
    if (dropout_p < 0.0 || dropout_p >= 1.0)
        throw ParameterError("dropout_p must lie in [0, 1)");
    if (norm_mode == NormMode::penalty && (lambda_mean < 0.0 || lambda_dev < 0.0))
        throw ParameterError("penalty weights must be non-negative");
    if (norm_mode == NormMode::reset && !(target_norm > 0.0))
        throw ParameterError("target_norm must be positive");
    if (n_basis < 1)
        throw ValidationError("n_basis must be >= 1");
}

TrainResult train(const TrainConfig& config, Index n_input, const PairSource& pairs) {
    config.validate();
    if (n_input < 1)
        throw ValidationError("n_input must be >= 1");

    Rng rng(config.rng_seed);
    TrainResult result;
    result.basis = ComplexBasis::random_init(config.n_basis, n_input, rng);
    if (config.norm_mode == NormMode::reset)
        renormalize_basis(result.basis, config.target_norm);

    if (config.epochs == 0)
        return result;

    const Index steps_per_epoch = config.transforms_per_epoch / config.batch_size;
    Optimizer opt(config.optimizer, config.learning_rate);

    Matrix a, b;
    for (Index epoch = 0; epoch < config.epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (Index step = 0; step < steps_per_epoch; ++step) {
            pairs(config.batch_size, rng, a, b);
            Matrix a_in = a;
            Matrix b_in = b;
            if (config.dropout_p > 0.0) {
                input_dropout_inplace(a_in, config.dropout_p, rng);
                input_dropout_inplace(b_in, config.dropout_p, rng);
            }

            // reconstruct the clean pair members from their dropped-out codes
            BackwardResult bw = [&] {
                try {
                    return backward_with_targets(result.basis, a_in, b_in, a, b, config.p_norm);
                } catch (const NumericError& e) {
                    std::ostringstream os;
                    os << "training diverged at epoch " << epoch << " step " << step << ": "
                       << e.what();
                    throw NumericError(os.str());
                }
            }();
            double batch_loss = bw.loss;
            if (config.norm_mode == NormMode::penalty) {
                NormPenalty pen =
                    norm_penalty(result.basis, config.lambda_mean, config.lambda_dev);
                batch_loss += pen.value;
                bw.grads.d_w_re += pen.grads.d_w_re;
                bw.grads.d_w_im += pen.grads.d_w_im;
            }

            if (!std::isfinite(batch_loss)) {
                std::ostringstream os;
                os << "training diverged: non-finite loss at epoch " << epoch << " step " << step;
                throw NumericError(os.str());
            }

            opt.step(result.basis, bw.grads);
            if (config.norm_mode == NormMode::reset)
                renormalize_basis(result.basis, config.target_norm);

            epoch_loss += batch_loss;
        }
        result.loss_history.push_back(epoch_loss / static_cast<double>(steps_per_epoch));
    }
    return result;
}

std::string to_string(NormMode mode) {
    switch (mode) {
    case NormMode::none: return "none";
    case NormMode::penalty: return "penalty";
    case NormMode::reset: return "reset";
    }
    return "none";
}

std::string to_string(OptimizerKind kind) {
    return kind == OptimizerKind::adam ? "adam" : "sgd";
}

NormMode norm_mode_from_string(const std::string& s) {
    if (s == "none") return NormMode::none;
    if (s == "penalty") return NormMode::penalty;
    if (s == "reset") return NormMode::reset;
    throw ParameterError("unknown norm mode: " + s);
}

OptimizerKind optimizer_from_string(const std::string& s) {
    if (s == "adam") return OptimizerKind::adam;
    if (s == "sgd") return OptimizerKind::sgd;
    throw ParameterError("unknown optimizer: " + s);
}

} // namespace cae
