#include "morrey/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace morrey;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("morrey_cli_" + tag + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed())))
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::vector<std::string>& args, std::string* out = nullptr)
{
    std::ostringstream os, err;
    const int rc = cli::run(args, os, err);
    if (out) *out = os.str();
    return rc;
}

GridGeometry unit(int depth) { return GridGeometry{DyadicCube{1, 0, {0, 0}}, depth}; }

} // namespace

TEST(CliParse, CanonicalRoundTrip)
{
    const std::vector<std::string> args{"experiment", "harness", "--theorem", "two-weight", "--levels", "4..6",
                                        "--alpha",    "1/4",     "--seed",    "9",     "--json"};
    const cli::RunConfig c = cli::parse(args);
    EXPECT_EQ(c.command, "experiment");
    EXPECT_EQ(c.kind, "harness");
    EXPECT_EQ(c.levels, (std::vector<int>{4, 5, 6}));
    EXPECT_EQ(c.exps.at("alpha").str(), "1/4");
    EXPECT_TRUE(c.json);
    const cli::RunConfig again = cli::parse(c.canonical());
    EXPECT_EQ(again.canonical_string(), c.canonical_string());
}

TEST(CliParse, RejectsMalformedInput)
{
    EXPECT_THROW(cli::parse({}), parameter_error);
    EXPECT_THROW(cli::parse({"frobnicate"}), parameter_error);
    EXPECT_THROW(cli::parse({"experiment", "nothing"}), parameter_error);
    EXPECT_THROW(cli::parse({"norm", "--p", "x/2"}), parameter_error);
    EXPECT_THROW(cli::parse({"norm", "--dim", "3"}), parameter_error);
    EXPECT_THROW(cli::parse({"norm", "--lebesgue", "--weak"}), parameter_error);
    EXPECT_THROW(cli::parse({"op", "--op", "zz"}), parameter_error);
    EXPECT_THROW(cli::parse({"norm", "--unknown", "1"}), parameter_error);
}

TEST(CliRun, ExitCodes)
{
    EXPECT_EQ(run({"bogus"}), 2);
    EXPECT_EQ(run({"norm"}), 2);
    EXPECT_EQ(run({"experiment", "sharpness", "--deltas", "1"}), 3);
    EXPECT_EQ(run({"experiment", "sharpness", "--deltas", "4,5"}), 0);
}

TEST(CliRun, NormOfWrittenGrid)
{
    TempDir d("norm");
    mgf::write_file(d.file("f.mgf"), GridFunction::constant(unit(4), 1.0, Sign::pos));
    std::string out;
    ASSERT_EQ(run({"norm", "--in", d.file("f.mgf"), "--p", "2", "--q", "1", "--json"}, &out), 0);
    const auto j = nlohmann::json::parse(out);
    EXPECT_NEAR(j["value"].get<double>(), 1.0, 1e-12);
    ASSERT_EQ(run({"norm", "--in", d.file("f.mgf"), "--lebesgue", "--t", "3", "--json"}, &out), 0);
    EXPECT_NEAR(nlohmann::json::parse(out)["value"].get<double>(), 1.0, 1e-12);
    EXPECT_EQ(run({"norm", "--in", d.file("f.mgf"), "--p", "1", "--q", "2"}), 2);
    EXPECT_EQ(run({"norm", "--in", d.file("missing.mgf"), "--p", "2", "--q", "1"}), 2);
}

TEST(CliRun, OperatorOutputMatchesLibrary)
{
    TempDir d("op");
    CounterRng rng(1, 1);
    const GridFunction f = random_step(1, 5, rng);
    mgf::write_file(d.file("f.mgf"), f);
    ASSERT_EQ(run({"op", "--op", "b", "--alpha", "1/2", "--in", d.file("f.mgf"), "--out", d.file("b.mgf")}), 0);
    const GridFunction got = mgf::read_file(d.file("b.mgf"));
    const GridFunction want = b_alpha(f, f, KernelSpec{0.5, 1});
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12 * want[i]);
    EXPECT_EQ(run({"op", "--op", "i", "--in", d.file("f.mgf")}), 2);
}

TEST(CliRun, CharacteristicOverflowIsNumericalError)
{
    TempDir d("char");
    const GridGeometry g = unit(3);
    mgf::write_file(d.file("v.mgf"), GridFunction::constant(g, 1e300, Sign::pos));
    mgf::write_file(d.file("w1.mgf"), GridFunction::constant(g, 1e-300, Sign::pos));
    mgf::write_file(d.file("w2.mgf"), GridFunction::constant(g, 1.0, Sign::pos));
    const std::vector<std::string> base{"char", "--v", d.file("v.mgf"), "--w1", d.file("w1.mgf"), "--w2",
                                        d.file("w2.mgf"), "--alpha", "1/2", "--q1", "4", "--q2", "4", "--r", "4"};
    auto args = base;
    args.insert(args.end(), {"--variant", "testing"});
    EXPECT_EQ(run(args), 3);
    EXPECT_EQ(run({"char", "--alpha", "1/2", "--q1", "4", "--q2", "4", "--r", "4", "--variant", "testing"}), 0);
}

TEST(CliRun, DecompositionTableAsJson)
{
    TempDir d("cz");
    CounterRng rng(2, 2);
    mgf::write_file(d.file("f.mgf"), random_step(1, 6, rng, -4.0, 4.0));
    std::string out;
    ASSERT_EQ(run({"cz", "--in", d.file("f.mgf"), "--json", "--out", d.file("cz.csv")}, &out), 0);
    std::istringstream lines(out);
    std::string line;
    int rows = 0;
    bool summary = false;
    while (std::getline(lines, line)) {
        const auto j = nlohmann::json::parse(line);
        if (j.contains("table")) {
            EXPECT_EQ(j["table"], "cz");
            ++rows;
        }
        summary = summary || j.contains("summary");
    }
    EXPECT_GT(rows, 0);
    EXPECT_TRUE(summary);
    EXPECT_TRUE(fs::exists(d.file("cz.csv")));
}

TEST(CliRun, ExperimentWritesCsv)
{
    TempDir d("exp");
    ASSERT_EQ(run({"experiment", "sw", "--beta", "1/20", "--gamma1", "1/10", "--gamma2", "1/10", "--out", d.path.string()}), 0);
    EXPECT_TRUE(fs::exists(d.file("sw.csv")));
}
