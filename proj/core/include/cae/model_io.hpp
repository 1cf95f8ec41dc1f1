#ifndef CAE_MODEL_IO_HPP
#define CAE_MODEL_IO_HPP

#include <filesystem>
#include <optional>

#include "cae/basis.hpp"
#include "cae/feature_matrix.hpp"
#include "cae/trainer.hpp"

namespace cae {

/// A trained model: the basis plus the input standardization applied before
/// projection (length-N mean/std over the flattened model input).
struct Model {
    ComplexBasis basis;
    StandardizationStats input_stats;

    /// Standardize rows with the stored stats, then project to magnitudes.
    Matrix magnitudes(const Matrix& raw_rows) const;
};

/// Binary container "CAE1": magic, little-endian u32 M, u32 N, M*N f64 w_re,
/// M*N f64 w_im (row-major), then N f64 mean and N f64 std.
void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

/// JSON-text sidecar carrying the TrainConfig for provenance, written next to
/// the model as <path>.json.
void save_train_config_json(const std::filesystem::path& path, const TrainConfig& config);
std::optional<TrainConfig> load_train_config_json(const std::filesystem::path& path);

} // namespace cae

#endif
