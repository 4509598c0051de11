#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "roughchange/cli.hpp"
#include "roughchange/errors.hpp"
#include "roughchange/eval.hpp"
#include "roughchange/image.hpp"

using namespace roughchange;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("roughchange_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        ::unsetenv("ROUGHCHANGE_CONFIG");

        SynthSpec spec;
        spec.width = 32;
        spec.height = 24;
        spec.patch = {4, 4, 10, 8};
        spec.noise_amplitude = 3;
        spec.seed = 5;
        pair_ = std::make_unique<SynthPair>(synth_pair(spec));
        save_image(pair_->before, path("a.png"));
        save_image(pair_->after, path("b.png"));
        save_mask(pair_->truth, path("truth.png"));
    }

    void TearDown() override { ::unsetenv("ROUGHCHANGE_CONFIG"); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
    std::unique_ptr<SynthPair> pair_;
};

}  // namespace

TEST_F(CliTest, DetectWritesMaskAndReport) {
    const CliRun r = run({"detect", path("a.png"), path("b.png"), "-t", "0.5", "-o", path("mask.png"), "--report",
                       path("r.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto report = read_json(path("r.json"));
    EXPECT_EQ(report["threshold_T"], 0.5);
    EXPECT_EQ(report["bins_B"], 32);
    EXPECT_EQ(report["candidate_rule"], "otsu");
    EXPECT_EQ(report["method"], "rough");
    EXPECT_EQ(load_mask(path("mask.png")), pair_->truth);
    EXPECT_EQ(report["changed_count"], pair_->truth.changed_count());
}

TEST_F(CliTest, DetectPrintsReportToStdoutAndMergesEval) {
    const CliRun r = run({"detect", path("a.png"), path("b.png"), "-o", path("mask.pgm"), "--truth", path("truth.png")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto report = nlohmann::json::parse(r.out);
    EXPECT_EQ(report["eval"]["f1"], 1.0);
    EXPECT_TRUE(fs::exists(path("mask.pgm")));
}

TEST_F(CliTest, DetectErrors) {
    EXPECT_EQ(run({"detect", path("missing.png"), path("b.png"), "-o", path("m.png")}).code, 3);
    EXPECT_EQ(run({"detect", path("a.png"), path("b.png"), "-t", "1.5"}).code, 2);
    EXPECT_EQ(run({"detect", path("a.png"), path("b.png"), "--bins", "0"}).code, 2);
    EXPECT_EQ(run({"detect", path("a.png"), path("b.png"), "--candidate-rule", "fixed:9999"}).code, 2);
    EXPECT_EQ(run({"detect", path("a.png"), path("b.png"), "--preset", "nonsense"}).code, 2);
    EXPECT_EQ(run({"detect", path("a.png")}).code, 2);
    EXPECT_EQ(run({}).code, 2);

    save_image(RasterImage(5, 5, 3), path("small.png"));
    EXPECT_EQ(run({"detect", path("a.png"), path("small.png"), "-o", path("m.png")}).code, 4);

    std::ofstream(path("junk.png")) << "not an image";
    EXPECT_EQ(run({"detect", path("a.png"), path("junk.png"), "-o", path("m.png")}).code, 3);
}

TEST_F(CliTest, PresetsAreEchoedAndOverriddenByExplicitThreshold) {
    for (const auto& preset : cli::threshold_presets()) {
        const CliRun r = run({"detect", path("a.png"), path("b.png"), "--preset", std::string(preset.name), "-o",
                           path("m.png"), "--report", path("p.json")});
        ASSERT_EQ(r.code, 0) << r.err;
        const auto report = read_json(path("p.json"));
        EXPECT_EQ(report["threshold_T"], preset.threshold);
        EXPECT_EQ(report["preset"], preset.name);
    }
    const CliRun r = run({"detect", path("a.png"), path("b.png"), "--preset", "medical", "-t", "0.9", "-o",
                       path("m.png"), "--report", path("p.json")});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(read_json(path("p.json"))["threshold_T"], 0.9);
}

TEST_F(CliTest, ZeroThresholdWarns) {
    const CliRun r = run({"detect", path("a.png"), path("b.png"), "-t", "0", "-o", path("m.png")});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("warning"), std::string::npos);
    EXPECT_EQ(load_mask(path("m.png")).changed_count(), pair_->truth.size());
}

TEST_F(CliTest, Baselines) {
    for (const std::string method : {"hcm", "fcm", "diff"}) {
        const CliRun r = run({"baseline", method, path("a.png"), path("b.png"), "-o", path(method + ".png"), "--report",
                           path(method + ".json")});
        ASSERT_EQ(r.code, 0) << method << ": " << r.err;
        const auto report = read_json(path(method + ".json"));
        EXPECT_EQ(report["method"], method);
        EXPECT_EQ(report.contains("iom_approximation"), method == "diff");
        EXPECT_EQ(load_mask(path(method + ".png")), pair_->truth) << method;
    }
    EXPECT_EQ(read_json(path("diff.json"))["iom_approximation"], true);

    const CliRun flagged = run({"baseline", "--method", "fcm", "--fuzzifier", "2", path("a.png"), path("b.png"), "-o",
                             path("f.png"), "--report", path("f.json")});
    ASSERT_EQ(flagged.code, 0) << flagged.err;
    EXPECT_EQ(read_json(path("f.json"))["fuzzifier"], 2.0);

    const CliRun fixed = run({"baseline", "diff", "--cutoff", "1530", path("a.png"), path("b.png"), "-o", path("d.png"),
                           "--report", path("d.json")});
    ASSERT_EQ(fixed.code, 0);
    EXPECT_EQ(read_json(path("d.json"))["cutoff"], 1530);
    EXPECT_EQ(load_mask(path("d.png")).changed_count(), 0U);
}

TEST_F(CliTest, BaselineErrors) {
    EXPECT_EQ(run({"baseline", "kmeans", path("a.png"), path("b.png")}).code, 2);
    EXPECT_EQ(run({"baseline", path("a.png"), path("b.png")}).code, 2);
    EXPECT_EQ(run({"baseline", "fcm", "--fuzzifier", "1", path("a.png"), path("b.png")}).code, 2);
    EXPECT_EQ(run({"baseline", "hcm", "--max-iter", "0", path("a.png"), path("b.png")}).code, 2);
    EXPECT_EQ(run({"baseline", "hcm", path("a.png"), path("nope.png")}).code, 3);
}

TEST_F(CliTest, BatchProcessesFramesAgainstReference) {
    fs::create_directories(dir_ / "frames");
    save_image(pair_->after, path("frames/f001.png"));
    save_image(pair_->before, path("frames/f002.ppm"));
    const CliRun r = run({"batch", path("a.png"), path("frames"), "-o", path("out"), "--preset", "surveillance"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(load_mask(path("out/f001.mask.png")), pair_->truth);
    EXPECT_EQ(load_mask(path("out/f002.mask.png")).changed_count(), 0U);
    const auto summary = read_json(path("out/summary.json"));
    ASSERT_EQ(summary["frames"].size(), 2U);
    EXPECT_EQ(summary["frames"][0]["frame"], "f001.png");
    EXPECT_EQ(summary["frames"][0]["changed_count"], pair_->truth.changed_count());
    EXPECT_EQ(summary["frames"][1]["changed_count"], 0);
    EXPECT_EQ(summary["threshold_T"], 0.52);
    EXPECT_EQ(read_json(path("out/f001.report.json"))["threshold_T"], 0.52);
}

TEST_F(CliTest, BatchToleratesOneBadFrame) {
    fs::create_directories(dir_ / "frames");
    save_image(pair_->after, path("frames/a.png"));
    std::ofstream(path("frames/b.png")) << "corrupt";
    save_image(pair_->after, path("frames/c.png"));
    const CliRun r = run({"batch", path("a.png"), path("frames"), "-o", path("out")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(path("out/a.mask.png")));
    EXPECT_FALSE(fs::exists(path("out/b.mask.png")));
    EXPECT_TRUE(fs::exists(path("out/c.mask.png")));
    const auto summary = read_json(path("out/summary.json"));
    EXPECT_EQ(summary["failed"], 1);
    EXPECT_EQ(summary["succeeded"], 2);
    EXPECT_EQ(summary["frames"][1]["status"], "failed");
}

TEST_F(CliTest, BatchFailures) {
    fs::create_directories(dir_ / "empty");
    EXPECT_EQ(run({"batch", path("a.png"), path("empty"), "-o", path("out")}).code, 3);

    fs::create_directories(dir_ / "bad");
    std::ofstream(path("bad/x.png")) << "corrupt";
    EXPECT_EQ(run({"batch", path("a.png"), path("bad"), "-o", path("out2")}).code, 3);

    EXPECT_EQ(run({"batch", path("a.png"), path("bad"), "-o", path("bad")}).code, 2);
}

TEST_F(CliTest, SynthAndEval) {
    const CliRun s = run({"synth", "--size", "64x64", "--patch", "10,10,20,20", "--seed", "7", "-o", path("syn")});
    ASSERT_EQ(s.code, 0) << s.err;
    for (const char* f : {"syn/before.png", "syn/after.png", "syn/truth.png"}) EXPECT_TRUE(fs::exists(path(f)));
    EXPECT_EQ(load_mask(path("syn/truth.png")).changed_count(), 400U);

    const CliRun e = run({"eval", path("syn/truth.png"), path("syn/truth.png")});
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_EQ(nlohmann::json::parse(e.out)["eval"]["f1"], 1.0);

    save_mask(ChangeMask(3, 3), path("small.png"));
    EXPECT_EQ(run({"eval", path("small.png"), path("syn/truth.png")}).code, 4);
    EXPECT_EQ(run({"synth", "--size", "10x10", "--patch", "5,5,6,6", "-o", path("bad")}).code, 2);
    EXPECT_EQ(run({"synth", "--size", "ten", "-o", path("bad")}).code, 2);
    EXPECT_EQ(run({"synth", "--background", "1,2,300", "-o", path("bad")}).code, 2);
}

TEST_F(CliTest, ConfigFileAndEnvironment) {
    std::ofstream(path("cfg.txt")) << "# defaults\nbins = 2\nthreshold=0.75\ncandidate-rule=fixed:1\nfuzzifier=3\n";
    CliRun r = run({"detect", path("a.png"), path("b.png"), "--config", path("cfg.txt"), "-o", path("m.png"),
                 "--report", path("c.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto report = read_json(path("c.json"));
    EXPECT_EQ(report["bins_B"], 2);
    EXPECT_EQ(report["threshold_T"], 0.75);
    EXPECT_EQ(report["candidate_rule"], "fixed:1");

    ::setenv("ROUGHCHANGE_CONFIG", path("cfg.txt").c_str(), 1);
    r = run({"detect", path("a.png"), path("b.png"), "--bins", "16", "-o", path("m.png"), "--report", path("e.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    report = read_json(path("e.json"));
    EXPECT_EQ(report["bins_B"], 16);
    EXPECT_EQ(report["threshold_T"], 0.75);
    ::unsetenv("ROUGHCHANGE_CONFIG");

    std::ofstream(path("bad.txt")) << "bogus=1\n";
    EXPECT_EQ(run({"detect", path("a.png"), path("b.png"), "--config", path("bad.txt")}).code, 2);
    std::ofstream(path("range.txt")) << "threshold=4\n";
    EXPECT_EQ(run({"detect", path("a.png"), path("b.png"), "--config", path("range.txt")}).code, 2);
    EXPECT_EQ(run({"detect", path("a.png"), path("b.png"), "--config", path("nope.txt")}).code, 3);
}

TEST(ParseConfig, Lines) {
    const auto cfg = cli::parse_config("a=1\n  # c\n\n--b = x y # trailing\n");
    EXPECT_EQ(cfg.at("a"), "1");
    EXPECT_EQ(cfg.at("b"), "x y");
    EXPECT_THROW(cli::parse_config("novalue\n"), InvalidArgument);
}

TEST_F(CliTest, HelpDocumentsDefaultsAndPresets) {
    const CliRun r = run({"detect", "--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0.55"), std::string::npos);
    EXPECT_NE(r.out.find("0.52"), std::string::npos);
    EXPECT_NE(r.out.find("0.3"), std::string::npos);
    EXPECT_NE(r.out.find("32"), std::string::npos);
    for (const char* cmd : {"baseline", "batch", "synth", "eval"}) EXPECT_EQ(run({cmd, "--help"}).code, 0) << cmd;
    EXPECT_NE(run({"baseline", "--help"}).out.find("IOM"), std::string::npos);
}

TEST_F(CliTest, RerunsAreByteIdentical) {
    for (int i = 0; i < 2; ++i) {
        ASSERT_EQ(run({"detect", path("a.png"), path("b.png"), "-o", path("m" + std::to_string(i) + ".png"),
                       "--report", path("r" + std::to_string(i) + ".json")})
                      .code,
                  0);
        ASSERT_EQ(run({"baseline", "fcm", path("a.png"), path("b.png"), "-o", path("f" + std::to_string(i) + ".png"),
                       "--report", path("fr" + std::to_string(i) + ".json")})
                      .code,
                  0);
    }
    EXPECT_EQ(slurp(path("m0.png")), slurp(path("m1.png")));
    EXPECT_EQ(slurp(path("r0.json")), slurp(path("r1.json")));
    EXPECT_EQ(slurp(path("f0.png")), slurp(path("f1.png")));
    EXPECT_EQ(slurp(path("fr0.json")), slurp(path("fr1.json")));
}
