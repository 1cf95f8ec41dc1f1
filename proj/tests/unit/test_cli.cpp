#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "cae/dataset.hpp"
#include "cae/feature_matrix.hpp"
#include "cae/model_io.hpp"
#include "test_support.hpp"

#ifndef CAE_TOOL_PATH
#define CAE_TOOL_PATH "cae"
#endif

using namespace cae;
namespace ts = cae::testsupport;
namespace fs = std::filesystem;
using ts::TempDir;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

RunResult run_tool(const TempDir& dir, const std::string& args) {
    const fs::path log = dir.path / "cli_log.txt";
    const std::string cmd =
        std::string(CAE_TOOL_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

std::string read_file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("missing input exits 2 and names the path") {
    TempDir dir;
    const RunResult r =
        run_tool(dir, "train --features " + (dir.path / "nope.ftm").string() + " --out " +
                          (dir.path / "m.cae").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("nope.ftm") != std::string::npos);
}

TEST_CASE("bad usage exits 2") {
    TempDir dir;
    CHECK(run_tool(dir, "train").exit_code == 2);               // missing --out
    CHECK(run_tool(dir, "no-such-command").exit_code == 2);
}

TEST_CASE("synth then train is deterministic byte for byte") {
    TempDir dir;
    const std::string piece = (dir.path / "p.ftm").string();
    REQUIRE(run_tool(dir, "synth --out " + piece + " --frames 80 --bins 12 --events 10 --seed 5")
                .exit_code == 0);

    const std::string train_args = "train --features " + piece +
                                   " --transform pitch_shift --range -4 4 --ngram 8"
                                   " --basis 8 --epochs 3 --transforms-per-epoch 400"
                                   " --batch 100 --dropout 0.5 --seed 9 --out ";
    REQUIRE(run_tool(dir, train_args + (dir.path / "m1.cae").string()).exit_code == 0);
    REQUIRE(run_tool(dir, train_args + (dir.path / "m2.cae").string()).exit_code == 0);
    CHECK(read_file_bytes(dir.path / "m1.cae") == read_file_bytes(dir.path / "m2.cae"));

    SUBCASE("artifacts land next to the model") {
        CHECK(fs::exists(dir.path / "m1.cae.json"));
        CHECK(fs::exists(dir.path / "m1.cae.loss.csv"));
        CHECK(fs::exists(dir.path / "run_config.cfg"));
    }
}

TEST_CASE("config file drives a run, flags override, unknown keys rejected") {
    TempDir dir;
    const std::string piece = (dir.path / "p.ftm").string();
    REQUIRE(run_tool(dir, "synth --out " + piece + " --frames 60 --bins 8 --events 6 --seed 2")
                .exit_code == 0);

    const fs::path cfg = dir.path / "train.cfg";
    {
        std::ofstream out(cfg);
        out << "features=" << piece << "\n";
        out << "transform=pitch_shift\n";
        out << "range=-2 2\n";
        out << "ngram=4\n";
        out << "basis=6\n";
        out << "epochs=2\n";
        out << "transforms-per-epoch=200\n";
        out << "batch=50\n";
        out << "seed=3\n";
    }
    const RunResult ok = run_tool(dir, "train --config " + cfg.string() + " --out " +
                                           (dir.path / "m.cae").string());
    CHECK(ok.exit_code == 0);

    // flag overrides the config value: a 10-basis model results
    const RunResult overridden =
        run_tool(dir, "train --config " + cfg.string() + " --basis 10 --out " +
                          (dir.path / "m10.cae").string());
    CHECK(overridden.exit_code == 0);
    CHECK(load_model(dir.path / "m10.cae").basis.n_basis() == 10);

    {
        std::ofstream out(cfg, std::ios::app);
        out << "frobnicate=1\n";
    }
    const RunResult bad = run_tool(dir, "train --config " + cfg.string() + " --out " +
                                            (dir.path / "mx.cae").string());
    CHECK(bad.exit_code == 2);
}

TEST_CASE("check-grad passes and the mutation hook fails") {
    TempDir dir;
    const RunResult pass = run_tool(dir, "check-grad --instances 3 --n 8 --m 5 --batch 2");
    CHECK(pass.exit_code == 0);
    CHECK(pass.output.find("PASS") != std::string::npos);

    const RunResult fail =
        run_tool(dir, "check-grad --instances 3 --n 8 --m 5 --batch 2 --negate");
    CHECK(fail.exit_code == 1);
    CHECK(fail.output.find("FAIL") != std::string::npos);
}

TEST_CASE("align of a sequence against itself reports full rates") {
    TempDir dir;
    const std::string piece = (dir.path / "p.ftm").string();
    REQUIRE(run_tool(dir, "synth --out " + piece + " --frames 70 --bins 12 --events 12 --seed 7")
                .exit_code == 0);
    const FeatureMatrix fm = load_feature_matrix(piece);
    const fs::path gt = dir.path / "gt.csv";
    {
        std::ofstream out(gt);
        for (int e = 0; e < 20; ++e) {
            const double t = e * fm.frame_hop_seconds * 3.0;
            out << t << "," << t << "\n";
        }
    }
    REQUIRE(run_tool(dir, "train --features " + piece +
                              " --transform pitch_shift --range -3 3 --ngram 4 --basis 8"
                              " --epochs 2 --transforms-per-epoch 200 --batch 50 --seed 1"
                              " --out " + (dir.path / "m.cae").string())
                .exit_code == 0);
    const RunResult r = run_tool(
        dir, "align --perf " + piece + " --score " + piece + " --model " +
                 (dir.path / "m.cae").string() + " --ngram 4 --radius 10 --gt " + gt.string() +
                 " --outdir " + (dir.path / "aln").string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir.path / "aln" / "path.csv"));
    CHECK(fs::exists(dir.path / "aln" / "report.json"));
    CHECK(fs::exists(dir.path / "aln" / "run_config.cfg"));
    CHECK(r.output.find("<=50ms 100%") != std::string::npos);
}

TEST_CASE("discover emits the artifact set") {
    TempDir dir;
    const std::string piece = (dir.path / "p.ftm").string();
    REQUIRE(run_tool(dir, "synth --out " + piece +
                              " --frames 120 --bins 12 --events 10 --seed 4 --plant 10 70 40 3")
                .exit_code == 0);
    REQUIRE(run_tool(dir, "train --features " + piece +
                              " --transform pitch_shift --range -4 4 --ngram 16 --basis 12"
                              " --epochs 2 --transforms-per-epoch 200 --batch 50 --seed 1"
                              " --out " + (dir.path / "m.cae").string())
                .exit_code == 0);
    const RunResult r = run_tool(dir, "discover --model " + (dir.path / "m.cae").string() +
                                          " --features " + piece +
                                          " --ngram 16 --ssm-csv --outdir " +
                                          (dir.path / "disc").string());
    CHECK(r.exit_code == 0);
    for (const char* artifact : {"ssm.ftm", "ssm.csv", "ssm.pgm", "sections.csv",
                                 "run_config.cfg"})
        CHECK(fs::exists(dir.path / "disc" / artifact));
}

TEST_CASE("classify on raw glyph pixels beats chance") {
    TempDir dir;
    const LabeledImages glyphs = ts::make_glyphs(30, 11);
    save_idx(dir.path / "imgs.idx", dir.path / "labs.idx", glyphs);

    const RunResult r = run_tool(
        dir, "classify --train-images " + (dir.path / "imgs.idx").string() +
                 " --train-labels " + (dir.path / "labs.idx").string() +
                 " --space raw --classifier knn --k 1 --train-size 100 --folds 2"
                 " --test-size 100 --seed 3 --outdir " + (dir.path / "cls").string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir.path / "cls" / "cv_report.json"));
    CHECK(fs::exists(dir.path / "cls" / "cv_report.csv"));

    std::ifstream in(dir.path / "cls" / "cv_report.json");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string payload = ss.str();
    const auto pos = payload.find("\"mean_error\"");
    REQUIRE(pos != std::string::npos);
    const double err = std::stod(payload.substr(payload.find(':', pos) + 1));
    CHECK(err < 0.9);
}

TEST_CASE("model incompatible with features is a validation error") {
    TempDir dir;
    const std::string piece = (dir.path / "p.ftm").string();
    REQUIRE(run_tool(dir, "synth --out " + piece + " --frames 60 --bins 8 --events 6 --seed 2")
                .exit_code == 0);
    REQUIRE(run_tool(dir, "train --features " + piece +
                              " --transform pitch_shift --range -2 2 --ngram 4 --basis 6"
                              " --epochs 1 --transforms-per-epoch 100 --batch 50 --seed 1"
                              " --out " + (dir.path / "m.cae").string())
                .exit_code == 0);
    // wrong n-gram size: model N = 32, features provide 8*8 = 64
    const RunResult r = run_tool(dir, "discover --model " + (dir.path / "m.cae").string() +
                                          " --features " + piece + " --ngram 8 --outdir " +
                                          (dir.path / "d").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("32") != std::string::npos);
    CHECK(r.output.find("64") != std::string::npos);
}

} // TEST_SUITE
