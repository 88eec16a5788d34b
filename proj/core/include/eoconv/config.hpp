#ifndef EOCONV_CONFIG_HPP
#define EOCONV_CONFIG_HPP

#include "eoconv/converter.hpp"
#include "eoconv/geometry.hpp"
#include "eoconv/units.hpp"

#include <optional>
#include <string>
#include <vector>

namespace eoconv
{

inline constexpr int kConfigVersion = 1;

struct GeometrySettings
{
    std::optional<Preset> preset;
    // Preset overrides; without a preset only ring_radius, azimuthal_coverage,
    // electrode_gap, vacuum_margin, microstrip_length and energy_fraction apply.
    PresetOverrides overrides;
    std::optional<Polarization> polarization; // default: preset's, else TE
    std::vector<Region> regions;              // custom geometry, rho relative to the ring radius

    CrossSectionGeometry resolve() const;
    Polarization resolved_polarization() const;
};

struct SolverSettings
{
    double resolution = 20e6;          // cells per metre
    double tolerance = 1e-10;          // electrostatic relative residual
    double eigen_tolerance = 1e-8;
    int n_phi = 64;
    std::optional<double> target_wavelength; // default: c / optical_frequency
    std::optional<int> azimuthal_number;     // skip the m-scan
    int m_scan = 5;
    double confinement = 1e-4;
};

struct ConverterSettings
{
    double optical_frequency = 200e12; // Hz
    double microwave_frequency = 6e9;  // Hz
    double optical_q = 1e5;
    double microwave_q = 1e3;
    double optical_coupling_ratio = 1.0;   // kappa_a_ex / kappa_a
    double microwave_coupling_ratio = 1.0; // kappa_b_ex / kappa_b
    double thermal_occupation = 0.0;
    PumpTopology topology = PumpTopology::dual_mode;
    std::optional<double> pump_power;    // W
    std::optional<double> photon_number; // neither: pump for C = 1
    std::optional<double> g0_override;   // Hz; bypasses the field solves
};

struct OutputSettings
{
    std::string directory;                 // empty: $EOCONV_OUTPUT_DIR or "eoconv-out"
    std::vector<std::string> formats{"json"};
    bool persist_fields = false;
    bool timestamps = false;
};

struct RunConfig
{
    int version = kConfigVersion;
    std::string material_file;
    std::vector<Material> materials_defined; // beyond the built-in library
    GeometrySettings geometry;
    SolverSettings solver;
    ConverterSettings converter;
    OutputSettings output;
    std::string source; // where the config came from

    MaterialLibrary library() const;
    double target_wavelength() const;
    ConverterParams converter_params(double g0) const;
};

// Parses YAML text; unknown keys, missing units and bad values raise
// ConfigError with line/column. `base_dir` resolves relative material files.
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>",
                       const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

// Config of a shipped preset with default solver/converter settings.
RunConfig preset_config(Preset preset);

// Loads a materials file (same schema as the `materials.define` list).
std::vector<Material> load_material_file(const std::string& path);

// Looks up a dotted parameter path (geometry.electrode_gap, converter.optical_q,
// ...) and sets it from an SI value. Throws ConfigError for unknown paths.
void set_parameter(RunConfig& config, const std::string& path, double si_value);
double get_parameter(const RunConfig& config, const std::string& path);
Dimension parameter_dimension(const std::string& path);
std::vector<std::string> parameter_paths();

} // namespace eoconv

#endif // EOCONV_CONFIG_HPP
