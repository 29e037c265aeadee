#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "tempdir.hpp"

using testutil::read_file;
using testutil::TempDir;

namespace {

struct Result {
    int code;
    std::string err;
    std::string out;
};

Result cli(const TempDir& dir, const std::string& args)
{
    const auto out = dir / "stdout.txt";
    const auto err = dir / "stderr.txt";
    const std::string cmd = std::string(SCHOLARREC_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_file(err), read_file(out)};
}

}  // namespace

TEST(Cli, ExitCodesAndErrorLines)
{
    TempDir dir("cli-errors");
    auto r = cli(dir, "pipeline --corpus " + (dir / "missing").string() + " --seed 1 --out " + (dir / "o").string());
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.err.rfind("error: config: ", 0), 0u) << r.err;
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);

    EXPECT_EQ(cli(dir, "frobnicate").code, 2);
    EXPECT_EQ(cli(dir, "compare " + (dir / "one.tsv").string()).code, 2);
    EXPECT_EQ(cli(dir, "evaluate --run " + (dir / "nope").string() + " --qrels " + (dir / "nope").string()).code,
              3);
    EXPECT_EQ(cli(dir, "--help").code, 0);
}

TEST(Cli, SeedIsRequiredForRandomizedCommands)
{
    TempDir dir("cli-seed");
    ASSERT_EQ(cli(dir, "synth --seed 3 --out " + (dir / "corpus").string()).code, 0);
    auto r = cli(dir, "make-testset --corpus " + (dir / "corpus").string() + " --out " + (dir / "t").string());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("seed"), std::string::npos) << r.err;
}

TEST(Cli, StagedCommandsAndPipelineAgree)
{
    TempDir dir("cli-stages");
    const auto corpus = (dir / "corpus").string();
    ASSERT_EQ(cli(dir, "synth --seed 42 --out " + corpus).code, 0);
    auto r = cli(dir, "ingest --corpus " + corpus);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("75"), std::string::npos) << r.out;

    const auto s = (dir / "s").string();
    const std::string base = "--corpus " + corpus + " --seed 42";
    ASSERT_EQ(cli(dir, "make-testset " + base + " --out " + s).code, 0);
    ASSERT_EQ(cli(dir, "cf-train --corpus " + corpus + " --testset " + s + "/testset.json --out " + s).code, 0);
    ASSERT_EQ(cli(dir, "index --corpus " + corpus + " --testset " + s + "/testset.json --out " + s).code, 0);
    r = cli(dir, "recommend --corpus " + corpus + " --testset " + s + "/testset.json --neighbors " + s +
                     "/neighbors.tsv --out " + s);
    ASSERT_EQ(r.code, 0) << r.err;
    r = cli(dir, "evaluate --run " + s + "/run.txt --qrels " + s + "/qrels.txt --out " + s);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("P_5"), std::string::npos);
    EXPECT_TRUE(std::filesystem::is_regular_file(dir / "s" / "index.json"));

    const auto p = (dir / "p").string();
    r = cli(dir, "pipeline " + base + " --out " + p);
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* f : {"testset.json", "qrels.txt", "neighbors.tsv", "run.txt", "metrics.tsv"}) {
        EXPECT_TRUE(std::filesystem::is_regular_file(dir / "p" / f)) << f;
    }
    // Staged commands inherit seed and scenario from the test set.
    for (const char* f : {"testset.json", "qrels.txt", "neighbors.tsv", "run.txt"}) {
        EXPECT_EQ(read_file(dir / "p" / f), read_file(dir / "s" / f)) << f;
    }

    EXPECT_EQ(cli(dir, "pipeline " + base + " --out " + p).code, 3);
    ASSERT_EQ(cli(dir, "pipeline " + base + " --out " + (dir / "p2").string()).code, 0);
    for (const char* f : {"run.txt", "metrics.tsv", "qrels.txt", "testset.json"}) {
        EXPECT_EQ(read_file(dir / "p" / f), read_file(dir / "p2" / f)) << f;
    }
    r = cli(dir, "compare " + p + "/metrics.tsv " + s + "/metrics.tsv");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("delta(hybrid-prf)"), std::string::npos) << r.out;
}

TEST(Cli, ThreadCountDoesNotChangeOutput)
{
    TempDir dir("cli-threads");
    const auto corpus = (dir / "corpus").string();
    ASSERT_EQ(cli(dir, "synth --seed 5 --out " + corpus).code, 0);
    ASSERT_EQ(cli(dir, "pipeline --corpus " + corpus + " --seed 5 --out " + (dir / "a").string()).code, 0);
    const std::string env = "SCHOLARREC_THREADS=1 ";
    const std::string cmd = env + SCHOLARREC_CLI + " pipeline --corpus " + corpus + " --seed 5 --out " +
                            (dir / "c").string() + " >/dev/null 2>&1";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_EQ(read_file(dir / "a" / "run.txt"), read_file(dir / "c" / "run.txt"));
    EXPECT_EQ(read_file(dir / "a" / "neighbors.tsv"), read_file(dir / "c" / "neighbors.tsv"));
}
