#ifndef EOCONV_PIPELINE_HPP
#define EOCONV_PIPELINE_HPP

#include "eoconv/config.hpp"
#include "eoconv/converter.hpp"
#include "eoconv/coupling.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace eoconv
{

// Thread-safe memo of field solutions, keyed by content hashes of the grid,
// drive and solver settings. Values are immutable once inserted.
class FieldCache
{
public:
    std::shared_ptr<const PotentialField> potential(std::uint64_t key) const;
    std::shared_ptr<const ModeSolution> mode(std::uint64_t key) const;
    // Returns the cached value when another thread inserted first.
    std::shared_ptr<const PotentialField> put(std::uint64_t key, std::shared_ptr<const PotentialField> v);
    std::shared_ptr<const ModeSolution> put(std::uint64_t key, std::shared_ptr<const ModeSolution> v);

    std::size_t hits() const;
    std::size_t misses() const;
    void count(bool hit) const;

private:
    mutable std::mutex mutex_;
    std::map<std::uint64_t, std::shared_ptr<const PotentialField>> potentials_;
    std::map<std::uint64_t, std::shared_ptr<const ModeSolution>> modes_;
    mutable std::size_t hits_ = 0;
    mutable std::size_t misses_ = 0;
};

struct PotentialSummary
{
    double applied_voltage = 0.0;
    double capacitance = 0.0;        // energy estimator
    double capacitance_charge = 0.0; // charge estimator
    double energy_per_unit_length = 0.0;
    double v_zpf = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool unit_drive = false; // C taken from a 1 V auxiliary solve
};

struct ModeSummary
{
    double omega = 0.0;
    int m = 0;
    double n_eff = 0.0;
    double fsr = 0.0;
    double tau = 0.0;
    double residual = 0.0;
    double boundary_ratio = 0.0;
    Polarization polarization = Polarization::TE;
};

// Independent estimates of g0 from the solved fields (diagnostic only).
struct CouplingDiagnostics
{
    double closed_form = 0.0;   // rad/s, V_b from C and the gap
    double generic_form = 0.0;  // rad/s
    double mode_volume = 0.0;   // m^3
    double r_effective = 0.0;   // m/V
};

struct RunReport
{
    RunConfig config;
    std::string version;
    std::optional<std::string> timestamp;
    std::string grid_hash;
    int grid_n_rho = 0;
    int grid_n_z = 0;
    double grid_spacing = 0.0;

    bool g0_injected = false;
    std::optional<PotentialSummary> potential;
    std::optional<ModeSummary> mode;
    CouplingResult coupling;
    std::optional<CouplingDiagnostics> diagnostics;
    ConverterParams params;
    ConversionReport conversion;
    std::vector<std::string> warnings;

    // Solved fields, kept for artefact export (not serialised).
    std::shared_ptr<const PotentialField> potential_field;
    std::shared_ptr<const ModeSolution> mode_solution;
};

// Library version string ("major.minor.patch").
const char* library_version() noexcept;

struct RunOptions
{
    FieldCache* cache = nullptr;
};

// Electrostatics and optics, then coupling, then converter theory. Failures
// are rethrown as StageError naming the stage ("geometry", "electrostatics",
// "optics", "coupling", "converter").
RunReport run_pipeline(const RunConfig& config, const RunOptions& options = {});

// Design-table g0 (Hz) for a preset, used by the injected-g0 table path.
double table1_injected_g0(Preset preset);
// Converter settings used for the four-geometry table.
RunConfig table1_config(Preset preset, bool inject_g0);

struct Table1Column
{
    std::string name;
    double g0_hz = 0.0;
    double C0 = 0.0;
    double p_single = 0.0;
    double p_dual = 0.0;
};

std::vector<Table1Column> table1_columns(const std::vector<RunReport>& reports);
// Text table (one column per report). Throws PreconditionError for no reports.
std::string emit_table1(const std::vector<RunReport>& reports);
std::string emit_table1_csv(const std::vector<RunReport>& reports);

// <sig> significant figures; fixed notation for 1e-3..1e5, else compact exponent.
std::string format_significant(double value, int sig);

// Lowest gap that keeps the electrodes outside the 40 dB optical contour
// (top/bottom: along z, side: along rho), from the unperturbed mode.
double feasible_gap_lower_bound(const RunConfig& config, FieldCache* cache = nullptr);

} // namespace eoconv

#endif // EOCONV_PIPELINE_HPP
