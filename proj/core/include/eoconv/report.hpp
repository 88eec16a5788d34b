#ifndef EOCONV_REPORT_HPP
#define EOCONV_REPORT_HPP

#include "eoconv/pipeline.hpp"
#include "eoconv/sweep.hpp"

#include <string>
#include <vector>

namespace eoconv
{

inline constexpr int kReportVersion = 1;

// Canonical configuration snapshot (JSON, same schema as the YAML input;
// dimensional values as lossless "<value> <SI unit>" strings). Material files
// are inlined so the snapshot is self-contained.
std::string config_json(const RunConfig& config);

// Structured run report. Numeric outputs are {"value", "unit"} objects;
// frequencies and rates are ordinary frequencies (/2pi) in Hz.
std::string report_json(const RunReport& report);
// key,value,unit rows.
std::string report_csv(const RunReport& report);
// Efficiency curve: offset from omega_b and gamma.
std::string gamma_curve_csv(const RunReport& report);
std::string report_text(const RunReport& report);

// Objectives as written to files: g0 as /2pi Hz, the rest unchanged.
const char* objective_unit(Objective objective) noexcept;
double objective_display(Objective objective, double value);

// index,<parameter>[unit],<objective>[unit],status,report_id
std::string sweep_csv(const SweepResult& result);
std::string sweep_manifest_json(const SweepResult& result, const RunConfig& config,
                                const std::optional<ScalarOptimum>& optimum = std::nullopt);

// Output directory: config value, else $EOCONV_OUTPUT_DIR, else "eoconv-out".
std::string default_output_dir(const RunConfig& config);

// Writes <stem>.json / .csv (+ _gamma.csv) / .txt for the requested formats
// and, when persist_fields is set, the field grid dumps. Returns the paths.
std::vector<std::string> write_report(const RunReport& report, const std::string& directory,
                                      const std::vector<std::string>& formats, const std::string& stem = "report");

void write_text_file(const std::string& path, const std::string& contents);

} // namespace eoconv

#endif // EOCONV_REPORT_HPP
