#include "predacgan/common/csv.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "predacgan_cli_test";

int run(const std::string& args) {
    const std::string cmd = std::string(PREDACGAN_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string dir(const std::string& name) {
    return (kRoot / name).string();
}

class Cli : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        fs::remove_all(kRoot);
        ASSERT_EQ(run("synth --signal 3 --noise 3 --days 300 --seed 7 --out " + dir("market")), 0);
        ASSERT_EQ(run("train --prices " + dir("market") + "/prices.csv --input-window 16 --horizon 5 "
                      "--train-end 180 --sample-stride 3 --epochs 2 --g-hidden 16 --d-hidden 16 --noise-dim 8 "
                      "--seed 1 --quiet --out " + dir("model")),
                  0);
    }
    static void TearDownTestSuite() { fs::remove_all(kRoot); }

    static std::string backtest_args(const std::string& out) {
        return "backtest --checkpoint " + dir("model") + "/checkpoint.json --prices " + dir("market") +
               "/prices.csv --eval-start 185 --eval-end 290 --horizon 5 --samples 11 --threads 2 --out " + out;
    }
};

}  // namespace

TEST_F(Cli, SynthWritesExpectedFiles) {
    const auto lines = predacgan::csv::read_lines(kRoot / "market" / "prices.csv");
    EXPECT_EQ(lines.front(), "date,asset_id,close");
    EXPECT_EQ(lines.size(), 1u + 6u * 300u);
    EXPECT_TRUE(fs::exists(kRoot / "market" / "manifest.csv"));
    EXPECT_TRUE(fs::exists(kRoot / "market" / "resolved_config.toml"));
}

TEST_F(Cli, SynthIsReproducible) {
    ASSERT_EQ(run("synth --signal 3 --noise 3 --days 300 --seed 7 --out " + dir("market2")), 0);
    EXPECT_EQ(slurp(kRoot / "market" / "prices.csv"), slurp(kRoot / "market2" / "prices.csv"));
}

TEST_F(Cli, MissingSeedIsUsageError) {
    EXPECT_EQ(run("synth --signal 2 --out " + dir("noseed")), 2);
    EXPECT_EQ(run("train --prices " + dir("market") + "/prices.csv --out " + dir("noseed")), 2);
}

TEST_F(Cli, UnknownCommandAndHelp) {
    EXPECT_EQ(run("frobnicate"), 2);
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run("train --help"), 0);
}

TEST_F(Cli, EchoedConfigReproducesOutputs) {
    ASSERT_EQ(run("synth --config " + dir("market") + "/resolved_config.toml --out " + dir("market3")), 0);
    EXPECT_EQ(slurp(kRoot / "market" / "prices.csv"), slurp(kRoot / "market3" / "prices.csv"));
}

TEST_F(Cli, UnknownConfigKeyRejected) {
    fs::create_directories(kRoot / "bad");
    std::ofstream(kRoot / "bad" / "cfg.toml") << "seed=1\nsignal=2\ncolour=blue\n";
    EXPECT_EQ(run("synth --config " + dir("bad") + "/cfg.toml --out " + dir("bad")), 2);
}

TEST_F(Cli, TrainOutputs) {
    const auto trace = predacgan::csv::read_lines(kRoot / "model" / "loss_trace.csv");
    EXPECT_EQ(trace.front(), "epoch,d_loss,g_loss");
    EXPECT_EQ(trace.size(), 3u);
    EXPECT_TRUE(fs::exists(kRoot / "model" / "checkpoint.json"));
}

TEST_F(Cli, ZeroEpochsWritesInitialCheckpoint) {
    ASSERT_EQ(run("train --prices " + dir("market") + "/prices.csv --input-window 16 --horizon 5 --epochs 0 "
                  "--g-hidden 8 --d-hidden 8 --noise-dim 4 --seed 2 --quiet --out " + dir("zero")),
              0);
    EXPECT_TRUE(fs::exists(kRoot / "zero" / "checkpoint.json"));
    EXPECT_EQ(predacgan::csv::read_lines(kRoot / "zero" / "loss_trace.csv").size(), 1u);
}

TEST_F(Cli, CorruptPricesIsDataError) {
    fs::create_directories(kRoot / "corrupt");
    std::ofstream(kRoot / "corrupt" / "prices.csv") << "date,asset_id,close\n0,A,1\n1,A\n";
    EXPECT_EQ(run("train --prices " + dir("corrupt") + "/prices.csv --seed 1 --out " + dir("corrupt")), 2);
}

TEST_F(Cli, DivergenceExitsWithThree) {
    EXPECT_EQ(run("train --prices " + dir("market") + "/prices.csv --input-window 16 --horizon 5 --epochs 3 "
                  "--g-hidden 8 --d-hidden 8 --noise-dim 4 --lr-d 1e300 --lr-g 1e300 --seed 3 --quiet --out " +
                  dir("diverge")),
              3);
}

TEST_F(Cli, MissingCheckpointIsUsageError) {
    EXPECT_EQ(run("backtest --checkpoint " + dir("nope") + "/c.json --prices " + dir("market") +
                  "/prices.csv --eval-start 185 --eval-end 290 --out " + dir("nope")),
              2);
}

TEST_F(Cli, BacktestSingleReport) {
    ASSERT_EQ(run(backtest_args(dir("bt1")) + " --thp 0.05 --thr -30"), 0);
    for (const char* f : {"metrics.json", "equity.csv", "weights.csv", "predictions.csv", "resolved_config.toml"}) {
        EXPECT_TRUE(fs::exists(kRoot / "bt1" / f)) << f;
    }
    EXPECT_FALSE(fs::exists(kRoot / "bt1" / "comparison.csv"));
}

TEST_F(Cli, BacktestGridSharesPredictions) {
    ASSERT_EQ(run(backtest_args(dir("grid")) + " --thr 0 --thr-grid 0,-10,-20,-30,-40"), 0);
    const auto rows = predacgan::csv::read_lines(kRoot / "grid" / "comparison.csv");
    EXPECT_EQ(rows.size(), 6u);
    ASSERT_EQ(run(backtest_args(dir("grid_b")) + " --thr -30"), 0);
    EXPECT_EQ(slurp(kRoot / "grid" / "predictions.csv"), slurp(kRoot / "grid_b" / "predictions.csv"));
}

TEST_F(Cli, BacktestThreeThpComparison) {
    ASSERT_EQ(run(backtest_args(dir("thp")) + " --thp 0.05,0.1,0.2 --thr-grid 0,-10,-20,-30,-40"), 0);
    EXPECT_EQ(predacgan::csv::read_lines(kRoot / "thp" / "comparison.csv").size(), 16u);
}

TEST_F(Cli, BacktestReproducibleAcrossThreads) {
    ASSERT_EQ(run(backtest_args(dir("t2")) + " --thr -20"), 0);
    ASSERT_EQ(run("backtest --config " + dir("t2") + "/resolved_config.toml --threads 1 --out " + dir("t1")), 0);
    for (const char* f : {"metrics.json", "equity.csv", "weights.csv", "predictions.csv"}) {
        EXPECT_EQ(slurp(kRoot / "t1" / f), slurp(kRoot / "t2" / f)) << f;
    }
}
