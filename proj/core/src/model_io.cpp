#include "cae/model_io.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "cae/error.hpp"
#include "cae/io_util.hpp"

namespace cae {

namespace {
constexpr char kModelMagic[4] = {'C', 'A', 'E', '1'};
}

Matrix Model::magnitudes(const Matrix& raw_rows) const {
    return magnitude_features(basis, standardize(raw_rows, input_stats));
}

void save_model(const std::filesystem::path& path, const Model& model) {
    const Index m = model.basis.n_basis();
    const Index n = model.basis.n_input();
    if (model.input_stats.mean.size() != n || model.input_stats.std.size() != n)
        throw ShapeError("standardization stats must have length n_input");

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot open " + path.string() + " for writing");
    out.write(kModelMagic, 4);
    io::write_u32_le(out, static_cast<std::uint32_t>(m));
    io::write_u32_le(out, static_cast<std::uint32_t>(n));
    for (Index j = 0; j < m; ++j)
        for (Index k = 0; k < n; ++k)
            io::write_f64_le(out, model.basis.w_re(j, k));
    for (Index j = 0; j < m; ++j)
        for (Index k = 0; k < n; ++k)
            io::write_f64_le(out, model.basis.w_im(j, k));
    for (Index k = 0; k < n; ++k)
        io::write_f64_le(out, model.input_stats.mean[k]);
    for (Index k = 0; k < n; ++k)
        io::write_f64_le(out, model.input_stats.std[k]);
    if (!out)
        throw FormatError("write failed: " + path.string());
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kModelMagic, 4) != 0)
        throw FormatError(path.string() + ": not a CAE1 model file");
    std::uint32_t m = 0, n = 0;
    if (!io::read_u32_le(in, m) || !io::read_u32_le(in, n))
        throw FormatError(path.string() + ": truncated CAE1 header");
    if (m == 0 || n == 0)
        throw FormatError(path.string() + ": CAE1 header declares empty basis");

    Model model;
    model.basis.w_re.resize(m, n);
    model.basis.w_im.resize(m, n);
    model.input_stats.mean.resize(n);
    model.input_stats.std.resize(n);
    const auto read_block = [&](auto&& assign, Index count, const char* what) {
        for (Index i = 0; i < count; ++i) {
            double v = 0.0;
            if (!io::read_f64_le(in, v))
                throw FormatError(path.string() + ": truncated " + what + " block");
            assign(i, v);
        }
    };
    read_block([&](Index i, double v) { model.basis.w_re(i / n, i % n) = v; },
               static_cast<Index>(m) * n, "w_re");
    read_block([&](Index i, double v) { model.basis.w_im(i / n, i % n) = v; },
               static_cast<Index>(m) * n, "w_im");
    read_block([&](Index i, double v) { model.input_stats.mean[i] = v; }, n, "mean");
    read_block([&](Index i, double v) { model.input_stats.std[i] = v; }, n, "std");
    return model;
}

void save_train_config_json(const std::filesystem::path& path, const TrainConfig& config) {
    nlohmann::json j{
        {"p_norm", config.p_norm},
        {"learning_rate", config.learning_rate},
        {"batch_size", config.batch_size},
        {"epochs", config.epochs},
        {"transforms_per_epoch", config.transforms_per_epoch},
        {"dropout_p", config.dropout_p},
        {"norm_mode", to_string(config.norm_mode)},
        {"lambda_mean", config.lambda_mean},
        {"lambda_dev", config.lambda_dev},
        {"target_norm", config.target_norm},
        {"rng_seed", config.rng_seed},
        {"optimizer", to_string(config.optimizer)},
        {"n_basis", config.n_basis},
    };
    std::ofstream out(path);
    if (!out)
        throw FormatError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

std::optional<TrainConfig> load_train_config_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        return std::nullopt;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    TrainConfig c;
    c.p_norm = j.value("p_norm", c.p_norm);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.epochs = j.value("epochs", c.epochs);
    c.transforms_per_epoch = j.value("transforms_per_epoch", c.transforms_per_epoch);
    c.dropout_p = j.value("dropout_p", c.dropout_p);
    c.norm_mode = norm_mode_from_string(j.value("norm_mode", to_string(c.norm_mode)));
    c.lambda_mean = j.value("lambda_mean", c.lambda_mean);
    c.lambda_dev = j.value("lambda_dev", c.lambda_dev);
    c.target_norm = j.value("target_norm", c.target_norm);
    c.rng_seed = j.value("rng_seed", c.rng_seed);
    c.optimizer = optimizer_from_string(j.value("optimizer", to_string(c.optimizer)));
    c.n_basis = j.value("n_basis", c.n_basis);
    return c;
}

} // namespace cae
