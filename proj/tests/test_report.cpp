#include "support.hpp"

#include "eoconv/errors.hpp"
#include "eoconv/report.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <functional>

using namespace eotest;
using nlohmann::json;

namespace
{

RunReport injected(Preset p)
{
    return run_pipeline(table1_config(p, true));
}

// every numeric leaf outside the config snapshot sits in a {"value","unit"} pair
void check_units(const json& j, const std::string& path, int& numbers)
{
    if (j.is_object()) {
        if (j.contains("value") && j.contains("unit")) {
            EXPECT_TRUE(j["unit"].is_string()) << path;
            ++numbers;
            return;
        }
        for (auto it = j.begin(); it != j.end(); ++it)
            check_units(it.value(), path + "." + it.key(), numbers);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            check_units(j[i], path + "[" + std::to_string(i) + "]", numbers);
    } else {
        EXPECT_FALSE(j.is_number()) << "bare number at " << path;
    }
}

} // namespace

TEST(ReportJson, EveryNumberHasUnit)
{
    const auto r = injected(Preset::G4);
    const json j = json::parse(report_json(r));
    EXPECT_EQ(j["report_version"], kReportVersion);
    int numbers = 0;
    for (const char* s : {"grid", "potential", "mode", "coupling", "diagnostics", "converter"})
        if (j.contains(s))
            check_units(j[s], s, numbers);
    EXPECT_GT(numbers, 15);
    EXPECT_EQ(j["coupling"]["g0_source"], "injected");
    EXPECT_NEAR(j["coupling"]["g0"]["value"].get<double>(), 50e3, 1e-6);
    EXPECT_EQ(j["coupling"]["g0"]["unit"], "Hz");
}

TEST(ReportJson, ConfigSnapshotReparses)
{
    auto cfg = load_config(std::string(EOCONV_CONFIG_DIR) + "/custom_stack.yaml");
    const auto text = config_json(cfg);
    const auto back = parse_config(text, "snapshot");
    EXPECT_EQ(config_json(back), text);
    EXPECT_EQ(back.geometry.regions.size(), cfg.geometry.regions.size());
    EXPECT_EQ(*back.converter.pump_power, *cfg.converter.pump_power);
}

TEST(ReportJson, SnapshotInlinesMaterialFile)
{
    auto cfg = load_config(std::string(EOCONV_CONFIG_DIR) + "/g1.yaml");
    const json j = json::parse(config_json(cfg));
    EXPECT_FALSE(j["materials"].contains("file"));
    EXPECT_EQ(j["materials"]["define"].size(), 2u);
    const auto back = parse_config(j.dump(), "snapshot");
    EXPECT_TRUE(back.library().get("LiNbO3").r_contracted().isApprox(cfg.library().get("LiNbO3").r_contracted(), 0));
}

TEST(ReportJson, ReportFileReparsesAsConfig)
{
    const auto r = injected(Preset::G2);
    const auto back = parse_config(report_json(r), "report.json");
    EXPECT_EQ(config_json(back), config_json(r.config));
}

TEST(ReportCsv, KeyValueUnit)
{
    const auto r = injected(Preset::G3);
    const auto csv = report_csv(r);
    EXPECT_EQ(csv.rfind("key,value,unit\n", 0), 0u);
    EXPECT_NE(csv.find("converter.C0,"), std::string::npos);
    const auto at = csv.find("\ncoupling.g0,");
    ASSERT_NE(at, std::string::npos);
    const auto line = csv.substr(at + 1, csv.find('\n', at + 1) - at - 1);
    EXPECT_NEAR(std::stod(line.substr(12)), 12e3, 1e-6) << line;
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "Hz");
    const auto curve = gamma_curve_csv(r);
    EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 202);
}

TEST(ReportText, MentionsKeyFigures)
{
    const auto t = report_text(injected(Preset::G1));
    EXPECT_NE(t.find("g0/2pi"), std::string::npos);
    EXPECT_NE(t.find("injected"), std::string::npos);
}

TEST(ReportFiles, WritesRequestedFormats)
{
    const auto dir = ::testing::TempDir() + "/eoconv_report_files";
    const auto r = injected(Preset::G4);
    const auto files = write_report(r, dir, {"json", "csv", "text"});
    EXPECT_EQ(files.size(), 4u);
    EXPECT_THROW(write_report(r, dir, {"xml"}), ConfigError);
}
