// cae: train complex-autoencoder bases and run the invariant-feature
// pipelines (repeated-section discovery, sequence alignment, rotated-image
// classification) from the command line.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cae/basis.hpp"
#include "cae/classify.hpp"
#include "cae/dataset.hpp"
#include "cae/dtw.hpp"
#include "cae/error.hpp"
#include "cae/feature_matrix.hpp"
#include "cae/loss.hpp"
#include "cae/model_io.hpp"
#include "cae/render.hpp"
#include "cae/similarity.hpp"
#include "cae/synth.hpp"
#include "cae/trainer.hpp"
#include "cae/transforms.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace cae;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitThreshold = 1;
constexpr int kExitUsage = 2;

// ---- option bundles ----------------------------------------------------

struct TrainOptions {
    std::string features;
    std::string images;
    std::string out;
    std::string transform = "pitch_shift";
    std::vector<long> range{-24, 24};
    std::vector<long> range2{-12, 12};
    std::vector<double> angle_range{0.0, 2.0 * std::numbers::pi};
    std::string scheme = "double";
    long ngram = 32;
    long ngram_hop = 1;
    TrainConfig config;
    std::string norm_mode = "none";
    std::string optimizer = "adam";
    long threads = 1;
};

struct ProjectOptions {
    std::string model;
    std::string features;
    std::string images;
    std::string out;
    std::string phases_out;
    long ngram = 1;
    long ngram_hop = 1;
};

struct DiscoverOptions {
    std::string model;
    std::string features;
    std::string outdir = ".";
    long ngram = 32;
    long ngram_hop = 1;
    long smooth = 10;
    double threshold = 0.01;
    long min_length = 10;
    long max_gap = 2;
    bool ssm_csv = false;
};

struct AlignOptions {
    std::string perf;
    std::string score;
    std::string model;
    std::string gt;
    std::string outdir = ".";
    long radius = 50;
    double tempo_factor = 1.0;
    long transpose = 0;
    long ngram = 8;
    long ngram_hop = 1;
    std::string distance = "cosine";
    bool raw = false;
};

struct ClassifyOptions {
    std::string model;
    std::string train_images;
    std::string train_labels;
    std::string test_images;
    std::string test_labels;
    std::string outdir = ".";
    long train_size = 1000;
    long folds = 50;
    long test_size = 10000;
    std::string classifier = "logreg";
    long k = 5;
    double l2 = 1e-4;
    double lr = 0.1;
    long epochs = 500;
    std::string space = "magnitude";
    std::string pca;
    long pca_count = 1000;
    std::uint64_t seed = 0;
};

struct CheckGradOptions {
    int p = 2;
    long instances = 20;
    long n = 12;
    long m = 8;
    long batch = 4;
    std::uint64_t seed = 1;
    double threshold = 1e-4;
    double step = 1e-5;
    bool negate = false;
};

struct SynthOptionsCli {
    std::string out;
    long frames = 256;
    long bins = 24;
    long events = 24;
    std::uint64_t seed = 0;
    double hop_seconds = 0.08998;
    std::vector<long> plant; // src,dst,len,shift
    bool csv = false;
};

// ---- small helpers ----------------------------------------------------

void write_resolved_config(CLI::App* sub, const fs::path& where) {
    std::error_code ec;
    fs::create_directories(where.parent_path(), ec);
    std::ofstream out(where);
    out << sub->config_to_str(true, false);
}

StandardizationStats tile_stats(const StandardizationStats& col_stats, Index n) {
    StandardizationStats tiled;
    const Index f = col_stats.mean.size();
    tiled.mean.resize(n * f);
    tiled.std.resize(n * f);
    for (Index t = 0; t < n; ++t) {
        tiled.mean.segment(t * f, f) = col_stats.mean;
        tiled.std.segment(t * f, f) = col_stats.std;
    }
    return tiled;
}

void check_model_width(const Model& model, Index n_input, const std::string& what) {
    if (model.basis.n_input() != n_input)
        throw ValidationError("model expects input length " +
                              std::to_string(model.basis.n_input()) + " but " + what +
                              " provides " + std::to_string(n_input));
}

void save_loss_history(const fs::path& path, const std::vector<double>& history) {
    std::ofstream out(path);
    out.precision(17);
    out << "epoch,mean_loss\n";
    for (std::size_t e = 0; e < history.size(); ++e)
        out << e << "," << history[e] << "\n";
}

// ---- train ----------------------------------------------------

int run_train(const TrainOptions& opt, CLI::App* sub) {
    if (opt.features.empty() == opt.images.empty())
        throw ValidationError("pass exactly one of --features or --images");

    Matrix dataset;      // raw rows fed to the transform sampler
    StandardizationStats model_stats;
    TransformSpec spec;
    spec.kind = transform_kind_from_string(opt.transform);

    if (!opt.features.empty()) {
        const FeatureMatrix fm = load_feature_matrix(opt.features);
        const auto [ignored, col_stats] = standardize(fm.values);
        dataset = ngram_slice(fm.values, opt.ngram, opt.ngram_hop);
        model_stats = tile_stats(col_stats, opt.ngram);
        spec.frames = opt.ngram;
        spec.bins = fm.bins();
    } else {
        const LabeledImages images = load_idx_images(opt.images);
        dataset = images.pixels;
        const auto [ignored, stats] = standardize(images.pixels);
        model_stats = stats;
        spec.height = images.height;
        spec.width = images.width;
    }

    if (spec.kind == TransformKind::rotate_2d) {
        spec.lo = opt.angle_range.at(0);
        spec.hi = opt.angle_range.at(1);
    } else {
        spec.lo = static_cast<double>(opt.range.at(0));
        spec.hi = static_cast<double>(opt.range.at(1));
        spec.second_lo = static_cast<double>(opt.range2.at(0));
        spec.second_hi = static_cast<double>(opt.range2.at(1));
    }
    spec.validate(dataset.cols());

    const PairScheme scheme =
        opt.scheme == "anchored" ? PairScheme::anchored : PairScheme::double_transform;

    TrainConfig config = opt.config;
    config.norm_mode = norm_mode_from_string(opt.norm_mode);
    config.optimizer = optimizer_from_string(opt.optimizer);
    config.validate();

    const StandardizationStats stats = model_stats;
    const Matrix pool = dataset;
    const PairSource source = [pool, spec, scheme, stats](Index batch, Rng& rng, Matrix& a,
                                                          Matrix& b) {
        TransformPairBatch pb = sample_pair(pool, spec, scheme, batch, rng);
        a = standardize(pb.a, stats);
        b = standardize(pb.b, stats);
    };

    const TrainResult result = train(config, dataset.cols(), source);

    const fs::path out(opt.out);
    Model model{result.basis, model_stats};
    save_model(out, model);
    save_train_config_json(out.string() + ".json", config);
    save_loss_history(out.string() + ".loss.csv", result.loss_history);
    write_resolved_config(sub, out.parent_path() / "run_config.cfg");

    std::cout << "trained " << config.n_basis << " basis vectors on " << dataset.rows()
              << " samples of length " << dataset.cols() << "\n";
    if (!result.loss_history.empty())
        std::cout << "first-epoch loss " << result.loss_history.front() << ", final "
                  << result.loss_history.back() << "\n";
    std::cout << "model written to " << out.string() << "\n";
    return kExitOk;
}

// ---- project ----------------------------------------------------

int run_project(const ProjectOptions& opt, CLI::App* sub) {
    if (opt.features.empty() == opt.images.empty())
        throw ValidationError("pass exactly one of --features or --images");
    const Model model = load_model(opt.model);

    Matrix rows;
    double hop_seconds = 1.0;
    if (!opt.features.empty()) {
        const FeatureMatrix fm = load_feature_matrix(opt.features);
        rows = ngram_slice(fm.values, opt.ngram, opt.ngram_hop);
        hop_seconds = fm.frame_hop_seconds * static_cast<double>(opt.ngram_hop);
        check_model_width(model, rows.cols(),
                          "n-grams of " + std::to_string(opt.ngram) + "x" +
                              std::to_string(fm.bins()));
    } else {
        const LabeledImages images = load_idx_images(opt.images);
        rows = images.pixels;
        check_model_width(model, rows.cols(), "images");
    }

    FeatureMatrix mags;
    mags.values = model.magnitudes(rows);
    mags.frame_hop_seconds = hop_seconds;
    save_feature_matrix_ftm(opt.out, mags);

    if (!opt.phases_out.empty()) {
        const Matrix std_rows = standardize(rows, model.input_stats);
        Matrix re, im;
        project(model.basis, std_rows, re, im);
        FeatureMatrix phases;
        phases.values.resize(rows.rows(), model.basis.n_basis());
        for (Index i = 0; i < rows.rows(); ++i) {
            const PolarCode code =
                polar_encode(re.row(i).transpose(), im.row(i).transpose());
            phases.values.row(i) = code.phase.transpose();
        }
        phases.frame_hop_seconds = hop_seconds;
        save_feature_matrix_ftm(opt.phases_out, phases);
    }

    write_resolved_config(sub, fs::path(opt.out).parent_path() / "run_config.cfg");
    std::cout << "projected " << rows.rows() << " rows into " << model.basis.n_basis()
              << " magnitudes -> " << opt.out << "\n";
    return kExitOk;
}

// ---- discover ----------------------------------------------------

int run_discover(const DiscoverOptions& opt, CLI::App* sub) {
    const Model model = load_model(opt.model);
    const FeatureMatrix fm = load_feature_matrix(opt.features);
    const Matrix grams = ngram_slice(fm.values, opt.ngram, opt.ngram_hop);
    check_model_width(model, grams.cols(),
                      "n-grams of " + std::to_string(opt.ngram) + "x" +
                          std::to_string(fm.bins()));

    const Matrix mags = model.magnitudes(grams);
    const double gram_hop_seconds =
        fm.frame_hop_seconds * static_cast<double>(opt.ngram_hop);

    SimilarityMatrix ssm = self_similarity(mags, gram_hop_seconds);
    ssm = diagonal_smooth(ssm, opt.smooth);
    ssm = postprocess(ssm);
    const std::vector<RepeatedSection> sections =
        find_diagonals(ssm, opt.threshold, opt.min_length, opt.max_gap);

    const fs::path outdir(opt.outdir);
    fs::create_directories(outdir);

    FeatureMatrix ssm_fm{ssm.values, gram_hop_seconds, "ssm"};
    save_feature_matrix_ftm(outdir / "ssm.ftm", ssm_fm);
    if (opt.ssm_csv)
        save_feature_matrix_csv(outdir / "ssm.csv", ssm_fm);
    write_pgm(outdir / "ssm.pgm", ssm.values);

    {
        std::ofstream out(outdir / "sections.csv");
        out.precision(17);
        out << "lag,start_a,start_b,length,score,start_a_seconds,start_b_seconds,"
               "length_seconds\n";
        for (const RepeatedSection& s : sections) {
            out << s.lag() << "," << s.a_start << "," << s.b_start << "," << s.length() << ","
                << s.score << "," << s.a_start * gram_hop_seconds << ","
                << s.b_start * gram_hop_seconds << "," << s.length() * gram_hop_seconds << "\n";
        }
    }
    write_resolved_config(sub, outdir / "run_config.cfg");
    std::cout << "found " << sections.size() << " repeated sections; artifacts in "
              << outdir.string() << "\n";
    return kExitOk;
}

// ---- align ----------------------------------------------------

int run_align(const AlignOptions& opt, CLI::App* sub) {
    const FeatureMatrix perf = load_feature_matrix(opt.perf);
    FeatureMatrix score = load_feature_matrix(opt.score);
    if (opt.tempo_factor != 1.0)
        score = tempo_scale(score, opt.tempo_factor);
    if (opt.transpose != 0)
        score.values = pitch_shift(score.values, opt.transpose);

    const Matrix grams_a = ngram_slice(perf.values, opt.ngram, opt.ngram_hop);
    const Matrix grams_b = ngram_slice(score.values, opt.ngram, opt.ngram_hop);

    Matrix feat_a, feat_b;
    if (opt.raw) {
        feat_a = grams_a;
        feat_b = grams_b;
    } else {
        const Model model = load_model(opt.model);
        check_model_width(model, grams_a.cols(),
                          "n-grams of " + std::to_string(opt.ngram) + "x" +
                              std::to_string(perf.bins()));
        feat_a = model.magnitudes(grams_a);
        feat_b = model.magnitudes(grams_b);
    }

    const FrameDistance dist =
        opt.distance == "euclidean" ? FrameDistance::euclidean : FrameDistance::cosine;
    const WarpingPath path = fastdtw(feat_a, feat_b, opt.radius, dist);

    const double hop_a = perf.frame_hop_seconds * static_cast<double>(opt.ngram_hop);
    const double hop_b = score.frame_hop_seconds * static_cast<double>(opt.ngram_hop);

    const fs::path outdir(opt.outdir);
    fs::create_directories(outdir);
    {
        std::ofstream out(outdir / "path.csv");
        out.precision(17);
        out << "i,j,time_a_seconds,time_b_seconds\n";
        for (const auto& [i, j] : path.pairs)
            out << i << "," << j << "," << i * hop_a << "," << j * hop_b << "\n";
    }

    json report;
    report["cost"] = path.cost;
    report["frames_a"] = feat_a.rows();
    report["frames_b"] = feat_b.rows();
    if (!opt.gt.empty()) {
        const GroundTruthMap gt = load_ground_truth_csv(opt.gt);
        const AlignmentReport r = evaluate_alignment(path, hop_a, hop_b, gt);
        report["q1_seconds"] = r.q1_seconds;
        report["median_seconds"] = r.median_seconds;
        report["q3_seconds"] = r.q3_seconds;
        report["rate_50ms"] = r.rate_50ms;
        report["rate_250ms"] = r.rate_250ms;
        report["clamped_events"] = r.clamped_events;
        std::cout << "median error " << r.median_seconds * 1000.0 << " ms, <=50ms "
                  << r.rate_50ms * 100.0 << "%, <=250ms " << r.rate_250ms * 100.0 << "%\n";
    }
    {
        std::ofstream out(outdir / "report.json");
        out << report.dump(2) << "\n";
    }
    write_resolved_config(sub, outdir / "run_config.cfg");
    std::cout << "alignment path with " << path.pairs.size() << " steps written to "
              << (outdir / "path.csv").string() << "\n";
    return kExitOk;
}

// ---- classify ----------------------------------------------------

int run_classify(const ClassifyOptions& opt, CLI::App* sub) {
    const LabeledImages train_pool = load_idx(opt.train_images, opt.train_labels);

    std::optional<Model> model;
    if (opt.space == "magnitude" || !opt.pca.empty()) {
        model = load_model(opt.model);
        check_model_width(*model, train_pool.pixels.cols(), "images");
    }

    const auto to_features = [&](const Matrix& pixels) {
        return opt.space == "magnitude" ? model->magnitudes(pixels) : pixels;
    };

    ClassifierSpec spec;
    spec.kind = opt.classifier == "knn" ? ClassifierSpec::Kind::knn
                                        : ClassifierSpec::Kind::logreg;
    spec.k = opt.k;
    spec.l2 = opt.l2;
    spec.lr = opt.lr;
    spec.epochs = opt.epochs;

    Rng rng(opt.seed);
    CvReport report;
    if (!opt.test_images.empty()) {
        const LabeledImages test_pool = load_idx(opt.test_images, opt.test_labels);
        report = cross_validate_pools(to_features(train_pool.pixels), train_pool.labels,
                                      to_features(test_pool.pixels), test_pool.labels,
                                      opt.train_size, opt.folds, opt.test_size, spec, rng);
    } else {
        report = cross_validate(to_features(train_pool.pixels), train_pool.labels,
                                opt.train_size, opt.folds, opt.test_size, spec, rng);
    }

    const fs::path outdir(opt.outdir);
    fs::create_directories(outdir);
    {
        json j;
        j["train_size"] = report.train_size;
        j["folds"] = report.per_fold_error.size();
        j["mean_error"] = report.mean_error;
        j["std_error"] = report.std_error;
        j["per_fold_error"] = report.per_fold_error;
        j["classifier"] = opt.classifier;
        j["space"] = opt.space;
        j["k"] = opt.k;
        j["l2"] = opt.l2;
        j["lr"] = opt.lr;
        j["epochs"] = opt.epochs;
        std::ofstream out(outdir / "cv_report.json");
        out << j.dump(2) << "\n";
    }
    {
        std::ofstream out(outdir / "cv_report.csv");
        out.precision(17);
        out << "fold,error\n";
        for (std::size_t f = 0; f < report.per_fold_error.size(); ++f)
            out << f << "," << report.per_fold_error[f] << "\n";
    }

    if (!opt.pca.empty()) {
        const Index count = std::min<Index>(opt.pca_count, train_pool.count());
        std::vector<ScatterPoint> points;
        if (opt.pca == "magnitude") {
            const Matrix mags = model->magnitudes(train_pool.pixels.topRows(count));
            const Matrix proj = pca_2d(mags);
            std::ofstream csv(outdir / "pca_magnitude.csv");
            csv << "x,y,label\n";
            for (Index i = 0; i < count; ++i) {
                csv << proj(i, 0) << "," << proj(i, 1) << ","
                    << train_pool.labels[static_cast<std::size_t>(i)] << "\n";
                points.push_back({proj(i, 0), proj(i, 1),
                                  train_pool.labels[static_cast<std::size_t>(i)]});
            }
            write_svg_scatter(outdir / "pca_magnitude.svg", points, "magnitude space (by label)");
        } else if (opt.pca == "phasediff") {
            // pairs of further-rotated images; the phase difference encodes the
            // rotation between the two, binned for coloring
            const Index n = model->basis.n_input();
            Matrix diffs(count, model->basis.n_basis());
            std::vector<int> bins(static_cast<std::size_t>(count));
            const Index side = train_pool.height;
            for (Index i = 0; i < count; ++i) {
                const Matrix img = train_pool.image(i % train_pool.count());
                const double delta = rng.uniform(0.0, 2.0 * std::numbers::pi);
                const Matrix rotated = rotate_2d(img, delta);
                Vector flat_a(n), flat_b(n);
                for (Index r = 0; r < side; ++r)
                    for (Index c = 0; c < side; ++c) {
                        flat_a[r * side + c] = img(r, c);
                        flat_b[r * side + c] = rotated(r, c);
                    }
                const Vector a_std =
                    standardize(flat_a.transpose(), model->input_stats).row(0).transpose();
                const Vector b_std =
                    standardize(flat_b.transpose(), model->input_stats).row(0).transpose();
                diffs.row(i) = phase_difference(model->basis, a_std, b_std).transpose();
                bins[static_cast<std::size_t>(i)] =
                    static_cast<int>(delta / (2.0 * std::numbers::pi) * 36.0) % 36;
            }
            const Matrix proj = pca_2d(diffs);
            std::ofstream csv(outdir / "pca_phasediff.csv");
            csv << "x,y,angle_bin\n";
            for (Index i = 0; i < count; ++i) {
                csv << proj(i, 0) << "," << proj(i, 1) << ","
                    << bins[static_cast<std::size_t>(i)] << "\n";
                points.push_back({proj(i, 0), proj(i, 1), bins[static_cast<std::size_t>(i)]});
            }
            write_svg_scatter(outdir / "pca_phasediff.svg", points,
                              "phase-difference space (by angle bin)");
        } else {
            throw ValidationError("--pca must be 'magnitude' or 'phasediff'");
        }
    }

    write_resolved_config(sub, outdir / "run_config.cfg");
    std::cout << "cv mean error " << report.mean_error << " (std " << report.std_error
              << ") over " << report.per_fold_error.size() << " folds\n";
    return kExitOk;
}

// ---- check-grad ----------------------------------------------------

int run_check_grad(const CheckGradOptions& opt) {
    Rng rng(opt.seed);
    double worst_re = 0.0, worst_im = 0.0;
    for (long i = 0; i < opt.instances; ++i) {
        ComplexBasis basis = ComplexBasis::random_init(opt.m, opt.n, rng);
        Matrix a(opt.batch, opt.n), b(opt.batch, opt.n);
        for (Index r = 0; r < opt.batch; ++r)
            for (Index c = 0; c < opt.n; ++c) {
                a(r, c) = rng.normal();
                b(r, c) = rng.normal();
            }
        const GradientCheckReport rep =
            check_gradients(basis, a, b, opt.p, opt.step, 1e-6, opt.negate);
        worst_re = std::max(worst_re, rep.max_rel_err_w_re);
        worst_im = std::max(worst_im, rep.max_rel_err_w_im);
    }
    std::cout << "max relative error over " << opt.instances << " instances (p=" << opt.p
              << "):\n";
    std::cout << "  w_re: " << worst_re << "\n";
    std::cout << "  w_im: " << worst_im << "\n";
    const bool pass = std::max(worst_re, worst_im) <= opt.threshold;
    std::cout << (pass ? "PASS" : "FAIL") << " (threshold " << opt.threshold << ")\n";
    return pass ? kExitOk : kExitThreshold;
}

// ---- synth ----------------------------------------------------

int run_synth(const SynthOptionsCli& opt, CLI::App* sub) {
    SynthOptions so;
    so.seed = opt.seed;
    so.frames = opt.frames;
    so.bins = opt.bins;
    so.n_events = opt.events;
    so.frame_hop_seconds = opt.hop_seconds;
    if (!opt.plant.empty()) {
        if (opt.plant.size() != 4)
            throw ValidationError("--plant needs src,dst,len,shift");
        so.plant = PlantedRepeat{opt.plant[0], opt.plant[1], opt.plant[2], opt.plant[3]};
    }
    const FeatureMatrix fm = synth_cqt_like(so);
    save_feature_matrix_ftm(opt.out, fm);
    if (opt.csv)
        save_feature_matrix_csv(fs::path(opt.out).replace_extension(".csv"), fm);
    write_resolved_config(sub, fs::path(opt.out).parent_path() / "run_config.cfg");
    std::cout << "wrote " << fm.frames() << "x" << fm.bins() << " synthetic features to "
              << opt.out << "\n";
    return kExitOk;
}

void add_config_support(CLI::App* sub) {
    sub->add_option("--config", "key=value config file; command-line flags override it");
}

// Every option takes its last occurrence so config entries (inserted where
// --config appeared) can be overridden by later command-line flags.
void finish_subcommand(CLI::App* sub) {
    for (CLI::Option* opt : sub->get_options())
        opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Replaces "--config FILE" with the file's key=value entries expanded to
// flags, validated against the subcommand's option set.
std::vector<std::string> expand_config_args(CLI::App& app, std::vector<std::string> args) {
    if (args.empty())
        return args;
    CLI::App* sub = app.get_subcommand_no_throw(args.front());
    if (sub == nullptr)
        return args;

    for (std::size_t i = 1; i < args.size(); ++i) {
        std::string file;
        std::size_t erase_count = 0;
        if (args[i] == "--config" && i + 1 < args.size()) {
            file = args[i + 1];
            erase_count = 2;
        } else if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
            erase_count = 1;
        } else {
            continue;
        }

        std::ifstream in(file);
        if (!in)
            throw FormatError("cannot open config file " + file);
        std::vector<std::string> expanded;
        std::string line;
        long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string entry = trim(line);
            if (entry.empty() || entry[0] == '#')
                continue;
            const auto eq = entry.find('=');
            if (eq == std::string::npos)
                throw FormatError(file + ": expected key=value at line " +
                                  std::to_string(line_no));
            const std::string key = trim(entry.substr(0, eq));
            const std::string value = trim(entry.substr(eq + 1));
            CLI::Option* opt = sub->get_option_no_throw("--" + key);
            if (opt == nullptr)
                throw ValidationError(file + ": unknown config key '" + key + "' at line " +
                                      std::to_string(line_no));
            if (opt->get_expected_min() == 0) {
                // flag entry: truthy enables it
                if (value == "1" || value == "true" || value == "yes")
                    expanded.push_back("--" + key);
            } else {
                expanded.push_back("--" + key);
                std::stringstream vs(value);
                std::string token;
                while (vs >> token)
                    expanded.push_back(token);
            }
        }
        args.erase(args.begin() + static_cast<long>(i),
                   args.begin() + static_cast<long>(i + erase_count));
        args.insert(args.begin() + static_cast<long>(i), expanded.begin(), expanded.end());
        i += expanded.size() - 1;
    }
    return args;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"complex-autoencoder toolkit: transformation-invariant features, "
                 "repeated-section discovery, alignment, invariant classification"};
    app.require_subcommand(1);

    // train
    TrainOptions train_opt;
    CLI::App* train_cmd = app.add_subcommand("train", "train a complex basis on transform pairs");
    add_config_support(train_cmd);
    train_cmd->add_option("--features", train_opt.features, "input feature matrix (FTM1 or CSV)");
    train_cmd->add_option("--images", train_opt.images, "input IDX image file");
    train_cmd->add_option("--out", train_opt.out, "output model path")->required();
    train_cmd->add_option("--transform", train_opt.transform,
                          "circular_shift|pitch_shift|time_shift|pitch_time_shift|rotate");
    train_cmd->add_option("--range", train_opt.range, "integer parameter range lo hi")
        ->expected(2);
    train_cmd->add_option("--range2", train_opt.range2, "time-shift range lo hi (compose)")
        ->expected(2);
    train_cmd->add_option("--angle-range", train_opt.angle_range, "rotation range lo hi radians")
        ->expected(2);
    train_cmd->add_option("--scheme", train_opt.scheme, "anchored|double");
    train_cmd->add_option("--ngram", train_opt.ngram, "n-gram frames for feature input");
    train_cmd->add_option("--ngram-hop", train_opt.ngram_hop, "n-gram hop in frames");
    train_cmd->add_option("--basis", train_opt.config.n_basis, "number of complex basis vectors");
    train_cmd->add_option("--p", train_opt.config.p_norm, "reconstruction error exponent, 1 or 2");
    train_cmd->add_option("--lr", train_opt.config.learning_rate, "learning rate");
    train_cmd->add_option("--batch", train_opt.config.batch_size, "batch size");
    train_cmd->add_option("--epochs", train_opt.config.epochs, "training epochs");
    train_cmd->add_option("--transforms-per-epoch", train_opt.config.transforms_per_epoch,
                          "pairs sampled per epoch");
    train_cmd->add_option("--dropout", train_opt.config.dropout_p, "input dropout probability");
    train_cmd->add_option("--norm-mode", train_opt.norm_mode, "none|penalty|reset");
    train_cmd->add_option("--lambda-mean", train_opt.config.lambda_mean, "mean-norm penalty");
    train_cmd->add_option("--lambda-dev", train_opt.config.lambda_dev, "norm-deviation penalty");
    train_cmd->add_option("--target-norm", train_opt.config.target_norm, "reset-mode row norm");
    train_cmd->add_option("--optimizer", train_opt.optimizer, "adam|sgd");
    train_cmd->add_option("--seed", train_opt.config.rng_seed, "rng seed");
    train_cmd->add_option("--threads", train_opt.threads, "worker threads (1 = deterministic)");

    // project
    ProjectOptions project_opt;
    CLI::App* project_cmd =
        app.add_subcommand("project", "project inputs into the magnitude space");
    add_config_support(project_cmd);
    project_cmd->add_option("--model", project_opt.model, "CAE1 model path")->required();
    project_cmd->add_option("--features", project_opt.features, "feature matrix input");
    project_cmd->add_option("--images", project_opt.images, "IDX image input");
    project_cmd->add_option("--ngram", project_opt.ngram, "n-gram frames");
    project_cmd->add_option("--ngram-hop", project_opt.ngram_hop, "n-gram hop");
    project_cmd->add_option("--out", project_opt.out, "output magnitude FTM1")->required();
    project_cmd->add_option("--phases", project_opt.phases_out, "optional phase FTM1 output");

    // discover
    DiscoverOptions discover_opt;
    CLI::App* discover_cmd =
        app.add_subcommand("discover", "find repeated (possibly transposed) sections");
    add_config_support(discover_cmd);
    discover_cmd->add_option("--model", discover_opt.model, "CAE1 model path")->required();
    discover_cmd->add_option("--features", discover_opt.features, "feature matrix input")
        ->required();
    discover_cmd->add_option("--ngram", discover_opt.ngram, "n-gram frames");
    discover_cmd->add_option("--ngram-hop", discover_opt.ngram_hop, "n-gram hop");
    discover_cmd->add_option("--smooth", discover_opt.smooth, "identity smoothing kernel size");
    discover_cmd->add_option("--threshold", discover_opt.threshold, "diagonal threshold");
    discover_cmd->add_option("--min-length", discover_opt.min_length, "minimum run length");
    discover_cmd->add_option("--max-gap", discover_opt.max_gap, "run merge gap");
    discover_cmd->add_flag("--ssm-csv", discover_opt.ssm_csv, "also write the SSM as CSV");
    discover_cmd->add_option("--outdir", discover_opt.outdir, "artifact directory");

    // align
    AlignOptions align_opt;
    CLI::App* align_cmd = app.add_subcommand("align", "align two sequences with FastDTW");
    add_config_support(align_cmd);
    align_cmd->add_option("--perf", align_opt.perf, "performance feature matrix")->required();
    align_cmd->add_option("--score", align_opt.score, "score feature matrix")->required();
    align_cmd->add_option("--model", align_opt.model, "CAE1 model path");
    align_cmd->add_option("--radius", align_opt.radius, "FastDTW radius");
    align_cmd->add_option("--tempo-factor", align_opt.tempo_factor, "tempo-scale the score");
    align_cmd->add_option("--transpose", align_opt.transpose, "transpose the score by bins");
    align_cmd->add_option("--gt", align_opt.gt, "ground-truth CSV (seconds,seconds)");
    align_cmd->add_option("--ngram", align_opt.ngram, "n-gram frames");
    align_cmd->add_option("--ngram-hop", align_opt.ngram_hop, "n-gram hop");
    align_cmd->add_option("--distance", align_opt.distance, "cosine|euclidean");
    align_cmd->add_flag("--raw", align_opt.raw, "align raw n-grams instead of magnitudes");
    align_cmd->add_option("--outdir", align_opt.outdir, "artifact directory");

    // classify
    ClassifyOptions classify_opt;
    CLI::App* classify_cmd =
        app.add_subcommand("classify", "cross-validated classification of labeled images");
    add_config_support(classify_cmd);
    classify_cmd->add_option("--model", classify_opt.model, "CAE1 model path");
    classify_cmd->add_option("--train-images", classify_opt.train_images, "train IDX images")
        ->required();
    classify_cmd->add_option("--train-labels", classify_opt.train_labels, "train IDX labels")
        ->required();
    classify_cmd->add_option("--test-images", classify_opt.test_images, "test IDX images");
    classify_cmd->add_option("--test-labels", classify_opt.test_labels, "test IDX labels");
    classify_cmd->add_option("--train-size", classify_opt.train_size, "per-fold train size");
    classify_cmd->add_option("--folds", classify_opt.folds, "resampling folds");
    classify_cmd->add_option("--test-size", classify_opt.test_size, "per-fold test size");
    classify_cmd->add_option("--classifier", classify_opt.classifier, "logreg|knn");
    classify_cmd->add_option("--k", classify_opt.k, "k for knn");
    classify_cmd->add_option("--l2", classify_opt.l2, "logreg l2 penalty");
    classify_cmd->add_option("--lr", classify_opt.lr, "logreg learning rate");
    classify_cmd->add_option("--epochs", classify_opt.epochs, "logreg epochs");
    classify_cmd->add_option("--space", classify_opt.space, "magnitude|raw");
    classify_cmd->add_option("--pca", classify_opt.pca, "emit 2-D PCA: magnitude|phasediff");
    classify_cmd->add_option("--pca-count", classify_opt.pca_count, "points in the PCA plot");
    classify_cmd->add_option("--seed", classify_opt.seed, "rng seed");
    classify_cmd->add_option("--outdir", classify_opt.outdir, "artifact directory");

    // check-grad
    CheckGradOptions grad_opt;
    CLI::App* grad_cmd =
        app.add_subcommand("check-grad", "compare analytic gradients to finite differences");
    add_config_support(grad_cmd);
    grad_cmd->add_option("--p", grad_opt.p, "loss exponent");
    grad_cmd->add_option("--instances", grad_opt.instances, "random instances");
    grad_cmd->add_option("--n", grad_opt.n, "input dimensionality");
    grad_cmd->add_option("--m", grad_opt.m, "basis count");
    grad_cmd->add_option("--batch", grad_opt.batch, "pairs per instance");
    grad_cmd->add_option("--seed", grad_opt.seed, "rng seed");
    grad_cmd->add_option("--threshold", grad_opt.threshold, "max relative error to pass");
    grad_cmd->add_option("--step", grad_opt.step, "finite-difference step");
    grad_cmd->add_flag("--negate", grad_opt.negate, "negate analytic gradients (mutation hook)")
        ->group(""); // hidden
    // synth
    SynthOptionsCli synth_opt;
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "generate a synthetic CQT-like feature matrix");
    add_config_support(synth_cmd);
    synth_cmd->add_option("--out", synth_opt.out, "output FTM1 path")->required();
    synth_cmd->add_option("--frames", synth_opt.frames, "time frames");
    synth_cmd->add_option("--bins", synth_opt.bins, "frequency bins");
    synth_cmd->add_option("--events", synth_opt.events, "note events");
    synth_cmd->add_option("--seed", synth_opt.seed, "rng seed");
    synth_cmd->add_option("--hop-seconds", synth_opt.hop_seconds, "frame hop in seconds");
    synth_cmd->add_option("--plant", synth_opt.plant,
                          "plant a transposed repeat: src dst len shift")
        ->expected(4);
    synth_cmd->add_flag("--csv", synth_opt.csv, "also write CSV");

    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        finish_subcommand(sub);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = expand_config_args(app, std::move(args));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    std::reverse(args.begin(), args.end());

    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (train_cmd->parsed())
            return run_train(train_opt, train_cmd);
        if (project_cmd->parsed())
            return run_project(project_opt, project_cmd);
        if (discover_cmd->parsed())
            return run_discover(discover_opt, discover_cmd);
        if (align_cmd->parsed())
            return run_align(align_opt, align_cmd);
        if (classify_cmd->parsed())
            return run_classify(classify_opt, classify_cmd);
        if (grad_cmd->parsed())
            return run_check_grad(grad_opt);
        if (synth_cmd->parsed())
            return run_synth(synth_opt, synth_cmd);
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
