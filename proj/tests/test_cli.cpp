#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace
{

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "eoconv");
    std::vector<const char*> argv;
    for (auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = eoconv::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

const std::string kConfigs = EOCONV_CONFIG_DIR;

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string temp_dir(const std::string& name)
{
    const auto d = std::filesystem::path(::testing::TempDir()) / name;
    std::filesystem::remove_all(d);
    return d.string();
}

} // namespace

TEST(Cli, CheckShippedConfig)
{
    const auto r = cli({"check", kConfigs + "/g1.yaml"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("ok"), std::string::npos);
}

TEST(Cli, Table1Injected)
{
    const auto r = cli({"table1", "--inject-g0"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("C0"), std::string::npos);
    EXPECT_NE(r.out.find("2e-10"), std::string::npos) << r.out;
    const auto csv = cli({"table1", "--inject-g0", "--format", "csv"});
    EXPECT_EQ(csv.code, 0);
    EXPECT_NE(csv.out.find(","), std::string::npos);
}

TEST(Cli, MissingFileExitsTwoWithPath)
{
    const auto r = cli({"run", "/definitely/missing.yaml"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("/definitely/missing.yaml"), std::string::npos);
}

TEST(Cli, UsageErrorsPrintHelp)
{
    for (auto args : std::vector<std::vector<std::string>>{{}, {"frobnicate"}, {"run", "--bogus"},
                                                            {"sweep", "x.yaml"}, {"--format", "xml", "check"}}) {
        const auto r = cli(args);
        EXPECT_EQ(r.code, 2);
        EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
    }
}

TEST(Cli, HelpExitsZero)
{
    EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, BadConfigExitsTwo)
{
    const auto dir = temp_dir("eoconv_cli_bad");
    std::filesystem::create_directories(dir);
    const auto path = dir + "/bad.yaml";
    std::ofstream(path) << "version: 1\ngeometry:\n  preset: G1\n  colour: red\n";
    const auto r = cli({"check", path});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("bad.yaml:4:"), std::string::npos) << r.err;

    std::ofstream(path) << "version: 1\ngeometry: {preset: G1}\nsolver: {resolution: 1 /um}\n";
    EXPECT_EQ(cli({"run", path, "--output-dir", dir}).code, 2);
}

TEST(Cli, SolverFailureExitsOne)
{
    const auto dir = temp_dir("eoconv_cli_fail");
    std::filesystem::create_directories(dir);
    const auto path = dir + "/hard.yaml";
    std::ofstream(path) << "version: 1\ngeometry: {preset: G4}\nsolver: {confinement: 1e-30}\n";
    const auto r = cli({"run", path, "--output-dir", dir});
    EXPECT_EQ(r.code, 1) << r.err;
    EXPECT_NE(r.err.find("optics"), std::string::npos);
}

TEST(Cli, RunWritesIdenticalReports)
{
    const auto a = temp_dir("eoconv_cli_run_a");
    const auto b = temp_dir("eoconv_cli_run_b");
    const auto ra = cli({"run", kConfigs + "/g4.yaml", "--output-dir", a});
    const auto rb = cli({"run", kConfigs + "/g4.yaml", "--output-dir", b});
    ASSERT_EQ(ra.code, 0) << ra.err;
    ASSERT_EQ(rb.code, 0) << rb.err;
    for (const char* f : {"report.json", "report.csv", "report_gamma.csv", "report.txt"}) {
        ASSERT_TRUE(std::filesystem::exists(std::filesystem::path(a) / f)) << f;
        EXPECT_EQ(slurp(std::filesystem::path(a) / f), slurp(std::filesystem::path(b) / f)) << f;
    }
}

TEST(Cli, OutputDirFromEnvironment)
{
    const auto d = temp_dir("eoconv_cli_env");
    ::setenv("EOCONV_OUTPUT_DIR", d.c_str(), 1);
    const auto r = cli({"run", "--preset", "G2", "--format", "json"});
    ::unsetenv("EOCONV_OUTPUT_DIR");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(d) / "report.json"));
}

TEST(Cli, SweepWritesCsvAndManifest)
{
    const auto d = temp_dir("eoconv_cli_sweep");
    std::filesystem::create_directories(d);
    const auto path = d + "/inj.yaml";
    std::ofstream(path) << "version: 1\ngeometry: {preset: G4}\nconverter: {g0_override: 50 kHz}\n";
    const auto r = cli({"sweep", path, "--param", "converter.pump_power", "--range", "0.5 mW", "3.5 mW", "--points",
                        "7", "--objective", "gamma_peak", "--optimize", "--output-dir", d, "--jobs", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto csv = slurp(std::filesystem::path(d) / "sweep.csv");
    EXPECT_EQ(csv.rfind("index,converter.pump_power[W],gamma_peak[1],status,report_id\n", 0), 0u) << csv;
    EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(d) / "sweep_manifest.json"));
    EXPECT_NE(r.out.find("optimum"), std::string::npos);

    const auto bad = cli({"sweep", path, "--param", "converter.pump_power", "--range", "1 um", "2 um"});
    EXPECT_EQ(bad.code, 2);
}

TEST(Cli, MatchFsr)
{
    const auto r = cli({"match-fsr", "--preset", "G4", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("ring_radius,"), std::string::npos);
}
