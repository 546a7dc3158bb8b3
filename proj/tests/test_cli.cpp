#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path work = fs::path(testing::TempDir()) / "leaky_cli_test";

struct CliResult {
    int code;
    std::string out;
};

CliResult run(const std::string& args, const std::string& env = "")
{
    fs::create_directories(work);
    const fs::path out = work / "stdout.txt";
    const std::string cmd = env + " \"" LEAKY_CLI_PATH "\" " + args + " > \"" + out.string() + "\" 2> \"" + (work / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(status), ss.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> data_rows(const std::string& csv)
{
    std::vector<std::string> rows;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') rows.push_back(line);
    return rows;
}

} // namespace

TEST(Cli, ResonanceTable)
{
    const CliResult r = run("resonances --k0a 30 --u0 1.5");
    ASSERT_EQ(r.code, 0);
    const auto rows = data_rows(r.out);
    ASSERT_EQ(rows.size(), 18u);
    EXPECT_EQ(rows[0], "m,eps_R,half_Gamma,re_K,im_K,residual,method");
    EXPECT_EQ(rows[1].rfind("24,-0.97362", 0), 0u);
    EXPECT_NE(r.out.find("# --u0 = 1.5"), std::string::npos);
    EXPECT_NE(r.out.find("# --format = csv"), std::string::npos);
}

TEST(Cli, RefinedResidualsAreSmall)
{
    const CliResult r = run("resonances --k0a 30 --u0 1.5 --refine --format json");
    ASSERT_EQ(r.code, 0);
    const auto doc = nlohmann::json::parse(r.out);
    ASSERT_EQ(doc["resonances"].size(), 17u);
    for (const auto& row : doc["resonances"]) {
        EXPECT_LE(row["residual"].template get<double>(), 1e-10);
        EXPECT_EQ(row["method"], "refined");
    }
}

TEST(Cli, EmptyRangeWarnsAndFails)
{
    const CliResult r = run("resonances --k0a 0.1 --u0 1.5");
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(data_rows(r.out).size(), 1u);
    EXPECT_NE(slurp(work / "stderr.txt").find("warning"), std::string::npos);
}

TEST(Cli, ValidationExitCode)
{
    EXPECT_EQ(run("transmission --k0a 30 --u0 1.5 --eps 1:2").code, 2);
    EXPECT_EQ(run("transmission --k0a 30 --u0 0.5").code, 2);
    EXPECT_EQ(run("transmission --k0a 30 --u0 1.5 --eps=-2:-1.5:4").code, 2);
    EXPECT_EQ(run("mode-field --k0a 30 --u0 1.5 --m 3").code, 2);
    EXPECT_EQ(run("nonsense").code, 2);
    EXPECT_EQ(run("shift --u0 1.5 --eps-fixed=-0.995").code, 2);
}

TEST(Cli, FbwPeakValue)
{
    const CliResult r = run("fbw --e0 0 --gamma 2 --grid=-10:10:5");
    ASSERT_EQ(r.code, 0);
    const auto rows = data_rows(r.out);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[3].rfind("0,1,", 0), 0u);
}

TEST(Cli, OutputIsDeterministicAndHonoursOutputDir)
{
    const fs::path dir = work / "outdir";
    fs::remove_all(dir);
    const std::string env = "LEAKY_OUTPUT_DIR=\"" + dir.string() + "\"";
    ASSERT_EQ(run("shift --k0a 30 --u0 1.5 --eps=-0.999:-0.001:64 -o a.csv", env).code, 0);
    ASSERT_EQ(run("shift --k0a 30 --u0 1.5 --eps=-0.999:-0.001:64 -o b.csv", env).code, 0);
    ASSERT_TRUE(fs::exists(dir / "a.csv"));
    std::string a = slurp(dir / "a.csv"), b = slurp(dir / "b.csv");
    a = a.substr(a.find("eps_R,"));
    b = b.substr(b.find("eps_R,"));
    EXPECT_EQ(a, b);
    EXPECT_EQ(data_rows(a).size(), 65u);
}

TEST(Cli, PropagateJsonFeedsBackThroughInit)
{
    const fs::path first = work / "first.json", second = work / "second.json";
    const std::string common = "propagate --k0a 30 --u0 1.5 --nx 1025 --z-max 20 --snapshots 5 --format json";
    ASSERT_EQ(run(common + " --m 24 -o \"" + first.string() + "\"").code, 0);
    ASSERT_EQ(run(common + " --init \"" + first.string() + "\" -o \"" + second.string() + "\"").code, 0);
    const auto a = nlohmann::json::parse(slurp(first));
    const auto b = nlohmann::json::parse(slurp(second));
    EXPECT_EQ(a["field"]["z"].size(), 5u);
    EXPECT_EQ(a["field"], b["field"]);
    EXPECT_EQ(a["curve"], b["curve"]);
    EXPECT_EQ(a["fit"], b["fit"]);
}

TEST(Cli, ModeFieldDefaultsAndParts)
{
    const CliResult r = run("mode-field --k0a 30 --u0 1.5 --m 24 --z 0:10:2 --part abs2");
    ASSERT_EQ(r.code, 0);
    const auto rows = data_rows(r.out);
    EXPECT_EQ(rows[0], "x,z,abs2_E");
    EXPECT_EQ(rows.size(), 1u + 2u * 801u);
}
