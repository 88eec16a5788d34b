#include "eoconv/config.hpp"

#include "eoconv/constants.hpp"
#include "eoconv/errors.hpp"
#include "eoconv/units.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace eoconv
{
namespace
{

namespace fs = std::filesystem;

// Error context: origin plus the node's position.
struct Ctx
{
    std::string origin;

    [[noreturn]] void fail(const YAML::Node& n, const std::string& what) const
    {
        const auto m = n.Mark();
        std::ostringstream os;
        os << origin;
        if (m.line >= 0)
            os << ":" << m.line + 1 << ":" << m.column + 1;
        os << ": " << what;
        throw ConfigError(os.str());
    }

    void keys(const YAML::Node& n, const std::string& section, std::initializer_list<const char*> allowed) const
    {
        if (!n.IsMap())
            fail(n, "section '" + section + "' must be a mapping");
        for (const auto& kv : n) {
            const auto key = kv.first.as<std::string>();
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
                fail(kv.first, "unknown key '" + key + "' in section '" + section + "'");
        }
    }

    std::string text(const YAML::Node& n, const std::string& key) const
    {
        if (!n.IsScalar())
            fail(n, "'" + key + "' must be a scalar");
        return n.Scalar();
    }

    double quantity(const YAML::Node& n, const std::string& key, Dimension dim) const
    {
        try {
            return parse_quantity(text(n, key), dim);
        } catch (const ConfigError& e) {
            fail(n, "'" + key + "': " + e.what());
        }
    }

    double number(const YAML::Node& n, const std::string& key) const { return quantity(n, key, Dimension::dimensionless); }

    int integer(const YAML::Node& n, const std::string& key) const
    {
        const double v = number(n, key);
        if (v != std::floor(v) || std::abs(v) > 1e9)
            fail(n, "'" + key + "' must be an integer");
        return static_cast<int>(v);
    }

    bool boolean(const YAML::Node& n, const std::string& key) const
    {
        const std::string s = text(n, key);
        if (s == "true")
            return true;
        if (s == "false")
            return false;
        fail(n, "'" + key + "' must be true or false");
    }
};

double pockels_entry(const Ctx& ctx, const YAML::Node& n)
{
    const std::string s = ctx.text(n, "pockels");
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    std::string rest(end);
    rest.erase(0, rest.find_first_not_of(" \t"));
    if (end != begin && rest == "pm/V")
        return v; // stored in pm/V as written
    if (end != begin && rest.empty() && v == 0.0)
        return 0.0;
    return ctx.quantity(n, "pockels", Dimension::electro_optic) / 1e-12;
}

Matrix3 permittivity(const Ctx& ctx, const YAML::Node& n, const std::string& key)
{
    Matrix3 m = Matrix3::Zero();
    if (!n.IsSequence() || n.size() != 3)
        ctx.fail(n, "'" + key + "' must be a list of 3 diagonal values or 3 rows of 3");
    if (n[0].IsSequence()) {
        for (int i = 0; i < 3; ++i) {
            if (!n[i].IsSequence() || n[i].size() != 3)
                ctx.fail(n[i], "'" + key + "' rows must have 3 entries");
            for (int j = 0; j < 3; ++j)
                m(i, j) = ctx.number(n[i][j], key);
        }
    } else {
        for (int i = 0; i < 3; ++i)
            m(i, i) = ctx.number(n[i], key);
    }
    return m;
}

Material material_from_node(const Ctx& ctx, const YAML::Node& n)
{
    ctx.keys(n, "material", {"name", "eps_optical", "eps_microwave", "refractive_index", "pockels"});
    for (const char* req : {"name", "eps_optical", "eps_microwave", "refractive_index"})
        if (!n[req])
            ctx.fail(n, std::string("material definition needs '") + req + "'");
    ContractedPockels r = ContractedPockels::Zero();
    if (const auto pn = n["pockels"]) {
        if (!pn.IsSequence() || pn.size() != 6)
            ctx.fail(pn, "'pockels' must have 6 rows (Voigt order xx, yy, zz, yz, xz, xy)");
        for (int i = 0; i < 6; ++i) {
            if (!pn[i].IsSequence() || pn[i].size() != 3)
                ctx.fail(pn[i], "'pockels' rows must have 3 entries");
            for (int k = 0; k < 3; ++k)
                r(i, k) = pockels_entry(ctx, pn[i][k]);
        }
    }
    try {
        return Material(ctx.text(n["name"], "name"), permittivity(ctx, n["eps_optical"], "eps_optical"),
                        permittivity(ctx, n["eps_microwave"], "eps_microwave"), r,
                        ctx.number(n["refractive_index"], "refractive_index"));
    } catch (const ConfigError& e) {
        ctx.fail(n, e.what());
    }
}

std::vector<Material> materials_from_list(const Ctx& ctx, const YAML::Node& n)
{
    if (!n.IsSequence())
        ctx.fail(n, "material definitions must be a list");
    std::vector<Material> out;
    for (const auto& item : n)
        out.push_back(material_from_node(ctx, item));
    return out;
}

YAML::Node load_yaml(const std::string& text, const std::string& origin)
{
    try {
        return YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        std::ostringstream os;
        os << origin << ":" << e.mark.line + 1 << ":" << e.mark.column + 1 << ": " << e.msg;
        throw ConfigError(os.str());
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Param
{
    Dimension dim;
    std::function<void(RunConfig&, double)> set;
    std::function<double(const RunConfig&)> get;
};

const std::map<std::string, Param>& parameter_table()
{
    static const std::map<std::string, Param> table = [] {
        std::map<std::string, Param> t;
        auto geom = [&](const char* name, Dimension d, std::optional<double> PresetOverrides::*field) {
            t[std::string("geometry.") + name] = {
                d, [field](RunConfig& c, double v) { c.geometry.overrides.*field = v; },
                [field, name](const RunConfig& c) {
                    if (const auto& v = c.geometry.overrides.*field)
                        return *v;
                    // fall back to the resolved geometry for the common ones
                    const auto g = c.geometry.resolve();
                    const std::string n = name;
                    if (n == "electrode_gap")
                        return g.electrode_gap;
                    if (n == "ring_radius")
                        return g.ring_radius;
                    if (n == "azimuthal_coverage")
                        return g.azimuthal_coverage;
                    if (n == "microstrip_length")
                        return g.microstrip_length;
                    if (n == "energy_fraction")
                        return g.energy_fraction;
                    return std::nan("");
                }};
        };
        geom("electrode_gap", Dimension::length, &PresetOverrides::electrode_gap);
        geom("ring_radius", Dimension::length, &PresetOverrides::ring_radius);
        geom("azimuthal_coverage", Dimension::dimensionless, &PresetOverrides::azimuthal_coverage);
        geom("core_width", Dimension::length, &PresetOverrides::core_width);
        geom("core_height", Dimension::length, &PresetOverrides::core_height);
        geom("electrode_width", Dimension::length, &PresetOverrides::electrode_width);
        geom("electrode_thickness", Dimension::length, &PresetOverrides::electrode_thickness);
        geom("electrode_offset", Dimension::length, &PresetOverrides::electrode_offset);
        geom("vacuum_margin", Dimension::length, &PresetOverrides::vacuum_margin);
        geom("microstrip_length", Dimension::length, &PresetOverrides::microstrip_length);
        geom("energy_fraction", Dimension::dimensionless, &PresetOverrides::energy_fraction);
        geom("drive_voltage", Dimension::voltage, &PresetOverrides::drive_voltage);

        t["solver.resolution"] = {Dimension::inverse_length,
                                  [](RunConfig& c, double v) { c.solver.resolution = v; },
                                  [](const RunConfig& c) { return c.solver.resolution; }};
        auto conv = [&](const char* name, Dimension d, double ConverterSettings::*field) {
            t[std::string("converter.") + name] = {d, [field](RunConfig& c, double v) { c.converter.*field = v; },
                                                   [field](const RunConfig& c) { return c.converter.*field; }};
        };
        conv("optical_frequency", Dimension::frequency, &ConverterSettings::optical_frequency);
        conv("microwave_frequency", Dimension::frequency, &ConverterSettings::microwave_frequency);
        conv("optical_q", Dimension::dimensionless, &ConverterSettings::optical_q);
        conv("microwave_q", Dimension::dimensionless, &ConverterSettings::microwave_q);
        conv("optical_coupling_ratio", Dimension::dimensionless, &ConverterSettings::optical_coupling_ratio);
        conv("microwave_coupling_ratio", Dimension::dimensionless, &ConverterSettings::microwave_coupling_ratio);
        conv("thermal_occupation", Dimension::dimensionless, &ConverterSettings::thermal_occupation);
        t["converter.pump_power"] = {Dimension::power,
                                     [](RunConfig& c, double v) {
                                         c.converter.pump_power = v;
                                         c.converter.photon_number.reset();
                                     },
                                     [](const RunConfig& c) { return c.converter.pump_power.value_or(std::nan("")); }};
        t["converter.photon_number"] = {
            Dimension::dimensionless,
            [](RunConfig& c, double v) {
                c.converter.photon_number = v;
                c.converter.pump_power.reset();
            },
            [](const RunConfig& c) { return c.converter.photon_number.value_or(std::nan("")); }};
        t["converter.g0_override"] = {Dimension::frequency,
                                      [](RunConfig& c, double v) { c.converter.g0_override = v; },
                                      [](const RunConfig& c) { return c.converter.g0_override.value_or(std::nan("")); }};
        return t;
    }();
    return table;
}

void parse_geometry(const Ctx& ctx, const YAML::Node& n, GeometrySettings& g)
{
    ctx.keys(n, "geometry",
             {"preset", "polarization", "regions", "electrode_gap", "ring_radius", "azimuthal_coverage", "core_width",
              "core_height", "electrode_width", "electrode_thickness", "electrode_offset", "vacuum_margin",
              "microstrip_length", "energy_fraction", "drive_voltage", "core_material", "cladding_material"});
    if (const auto p = n["preset"]) {
        try {
            g.preset = parse_preset(ctx.text(p, "preset"));
        } catch (const ConfigError& e) {
            ctx.fail(p, e.what());
        }
    }
    if (const auto p = n["polarization"]) {
        try {
            g.polarization = parse_polarization(ctx.text(p, "polarization"));
        } catch (const ConfigError& e) {
            ctx.fail(p, e.what());
        }
    }
    auto& o = g.overrides;
    const std::pair<const char*, std::optional<double> PresetOverrides::*> common[] = {
        {"electrode_gap", &PresetOverrides::electrode_gap},
        {"ring_radius", &PresetOverrides::ring_radius},
        {"vacuum_margin", &PresetOverrides::vacuum_margin},
        {"microstrip_length", &PresetOverrides::microstrip_length},
    };
    for (auto [key, field] : common)
        if (const auto v = n[key])
            o.*field = ctx.quantity(v, key, Dimension::length);
    if (const auto v = n["azimuthal_coverage"])
        o.azimuthal_coverage = ctx.number(v, "azimuthal_coverage");
    if (const auto v = n["energy_fraction"])
        o.energy_fraction = ctx.number(v, "energy_fraction");

    const std::pair<const char*, std::optional<double> PresetOverrides::*> preset_only[] = {
        {"core_width", &PresetOverrides::core_width},
        {"core_height", &PresetOverrides::core_height},
        {"electrode_width", &PresetOverrides::electrode_width},
        {"electrode_thickness", &PresetOverrides::electrode_thickness},
        {"electrode_offset", &PresetOverrides::electrode_offset},
    };
    for (auto [key, field] : preset_only) {
        if (const auto v = n[key]) {
            if (!g.preset)
                ctx.fail(v, std::string("'") + key + "' is only valid together with a preset");
            o.*field = ctx.quantity(v, key, Dimension::length);
        }
    }
    if (const auto v = n["drive_voltage"]) {
        if (!g.preset)
            ctx.fail(v, "'drive_voltage' is only valid together with a preset; set electrode potentials instead");
        o.drive_voltage = ctx.quantity(v, "drive_voltage", Dimension::voltage);
    }
    for (const char* key : {"core_material", "cladding_material"}) {
        if (const auto v = n[key]) {
            if (!g.preset)
                ctx.fail(v, std::string("'") + key + "' is only valid together with a preset");
            (std::string(key) == "core_material" ? o.core_material : o.cladding_material) = ctx.text(v, key);
        }
    }

    if (const auto regions = n["regions"]) {
        if (g.preset)
            ctx.fail(regions, "'regions' cannot be combined with a preset");
        if (!regions.IsSequence())
            ctx.fail(regions, "'regions' must be a list");
        for (const auto& r : regions) {
            ctx.keys(r, "geometry.regions", {"name", "role", "material", "rho", "z", "potential"});
            for (const char* req : {"name", "role", "material", "rho", "z"})
                if (!r[req])
                    ctx.fail(r, std::string("region needs '") + req + "'");
            Region reg;
            reg.name = ctx.text(r["name"], "name");
            try {
                reg.role = parse_role(ctx.text(r["role"], "role"));
            } catch (const ConfigError& e) {
                ctx.fail(r["role"], e.what());
            }
            reg.material = ctx.text(r["material"], "material");
            for (const char* axis : {"rho", "z"}) {
                const auto span = r[axis];
                if (!span.IsSequence() || span.size() != 2)
                    ctx.fail(span, std::string("'") + axis + "' must be [min, max]");
                const double lo = ctx.quantity(span[0], axis, Dimension::length);
                const double hi = ctx.quantity(span[1], axis, Dimension::length);
                if (std::string(axis) == "rho") {
                    reg.box.rho_min = lo;
                    reg.box.rho_max = hi;
                } else {
                    reg.box.z_min = lo;
                    reg.box.z_max = hi;
                }
            }
            if (const auto v = r["potential"]) {
                if (reg.role != RegionRole::electrode)
                    ctx.fail(v, "'potential' is only valid on electrode regions");
                reg.potential = ctx.quantity(v, "potential", Dimension::voltage);
            }
            g.regions.push_back(reg);
        }
    } else if (!g.preset) {
        ctx.fail(n, "geometry needs either 'preset' or 'regions'");
    }
    if (!g.preset && !o.ring_radius)
        ctx.fail(n, "custom geometry needs 'ring_radius'");
}

void parse_solver(const Ctx& ctx, const YAML::Node& n, SolverSettings& s)
{
    ctx.keys(n, "solver",
             {"resolution", "tolerance", "eigen_tolerance", "n_phi", "target_wavelength", "azimuthal_number", "m_scan",
              "confinement"});
    if (const auto v = n["resolution"])
        s.resolution = ctx.quantity(v, "resolution", Dimension::inverse_length);
    if (const auto v = n["tolerance"])
        s.tolerance = ctx.number(v, "tolerance");
    if (const auto v = n["eigen_tolerance"])
        s.eigen_tolerance = ctx.number(v, "eigen_tolerance");
    if (const auto v = n["n_phi"])
        s.n_phi = ctx.integer(v, "n_phi");
    if (const auto v = n["target_wavelength"])
        s.target_wavelength = ctx.quantity(v, "target_wavelength", Dimension::length);
    if (const auto v = n["azimuthal_number"])
        s.azimuthal_number = ctx.integer(v, "azimuthal_number");
    if (const auto v = n["m_scan"])
        s.m_scan = ctx.integer(v, "m_scan");
    if (const auto v = n["confinement"])
        s.confinement = ctx.number(v, "confinement");
    if (!(s.resolution > 0.0))
        ctx.fail(n, "resolution must be positive");
    if (!(s.tolerance > 0.0) || !(s.eigen_tolerance > 0.0))
        ctx.fail(n, "tolerances must be positive");
    if (s.n_phi < 1)
        ctx.fail(n, "n_phi must be >= 1");
    if (s.azimuthal_number && *s.azimuthal_number < 1)
        ctx.fail(n["azimuthal_number"], "azimuthal_number must be >= 1");
}

void parse_converter(const Ctx& ctx, const YAML::Node& n, ConverterSettings& c)
{
    ctx.keys(n, "converter",
             {"optical_frequency", "microwave_frequency", "optical_q", "microwave_q", "optical_coupling_ratio",
              "microwave_coupling_ratio", "thermal_occupation", "topology", "pump_power", "photon_number",
              "g0_override"});
    if (const auto v = n["optical_frequency"])
        c.optical_frequency = ctx.quantity(v, "optical_frequency", Dimension::frequency);
    if (const auto v = n["microwave_frequency"])
        c.microwave_frequency = ctx.quantity(v, "microwave_frequency", Dimension::frequency);
    if (const auto v = n["optical_q"])
        c.optical_q = ctx.number(v, "optical_q");
    if (const auto v = n["microwave_q"])
        c.microwave_q = ctx.number(v, "microwave_q");
    if (const auto v = n["optical_coupling_ratio"])
        c.optical_coupling_ratio = ctx.number(v, "optical_coupling_ratio");
    if (const auto v = n["microwave_coupling_ratio"])
        c.microwave_coupling_ratio = ctx.number(v, "microwave_coupling_ratio");
    if (const auto v = n["thermal_occupation"])
        c.thermal_occupation = ctx.number(v, "thermal_occupation");
    if (const auto v = n["topology"]) {
        try {
            c.topology = parse_topology(ctx.text(v, "topology"));
        } catch (const ConfigError& e) {
            ctx.fail(v, e.what());
        }
    }
    if (const auto v = n["pump_power"])
        c.pump_power = ctx.quantity(v, "pump_power", Dimension::power);
    if (const auto v = n["photon_number"])
        c.photon_number = ctx.number(v, "photon_number");
    if (c.pump_power && c.photon_number)
        ctx.fail(n, "give either 'pump_power' or 'photon_number', not both");
    if (const auto v = n["g0_override"])
        c.g0_override = ctx.quantity(v, "g0_override", Dimension::frequency);

    if (!(c.optical_frequency > 0.0) || !(c.microwave_frequency > 0.0))
        ctx.fail(n, "frequencies must be positive");
    if (!(c.optical_q > 0.0) || !(c.microwave_q > 0.0))
        ctx.fail(n, "quality factors must be positive");
    for (double r : {c.optical_coupling_ratio, c.microwave_coupling_ratio})
        if (!(r >= 0.0 && r <= 1.0))
            ctx.fail(n, "coupling ratios (kappa_ex / kappa) must lie in [0, 1]");
    if (!(c.thermal_occupation >= 0.0))
        ctx.fail(n, "thermal_occupation must be >= 0");
    if ((c.pump_power && *c.pump_power < 0.0) || (c.photon_number && *c.photon_number < 0.0))
        ctx.fail(n, "pump must be non-negative");
    if (c.g0_override && *c.g0_override < 0.0)
        ctx.fail(n["g0_override"], "g0_override must be non-negative");
}

void parse_output(const Ctx& ctx, const YAML::Node& n, OutputSettings& o)
{
    ctx.keys(n, "output", {"directory", "formats", "persist_fields", "timestamps"});
    if (const auto v = n["directory"])
        o.directory = ctx.text(v, "directory");
    if (const auto v = n["formats"]) {
        o.formats.clear();
        const auto add = [&](const YAML::Node& f) {
            const std::string s = ctx.text(f, "formats");
            if (s != "json" && s != "csv" && s != "text")
                ctx.fail(f, "unknown output format '" + s + "' (json, csv, text)");
            o.formats.push_back(s);
        };
        if (v.IsSequence())
            for (const auto& f : v)
                add(f);
        else
            add(v);
    }
    if (const auto v = n["persist_fields"])
        o.persist_fields = ctx.boolean(v, "persist_fields");
    if (const auto v = n["timestamps"])
        o.timestamps = ctx.boolean(v, "timestamps");
}

} // namespace

CrossSectionGeometry GeometrySettings::resolve() const
{
    if (preset)
        return geometry_from_preset(*preset, overrides);
    CrossSectionGeometry g;
    g.ring_radius = overrides.ring_radius.value_or(0.0);
    g.azimuthal_coverage = overrides.azimuthal_coverage.value_or(1.0);
    g.electrode_gap = overrides.electrode_gap.value_or(0.0);
    g.vacuum_margin = overrides.vacuum_margin;
    if (overrides.microstrip_length)
        g.microstrip_length = *overrides.microstrip_length;
    if (overrides.energy_fraction)
        g.energy_fraction = *overrides.energy_fraction;
    g.layout = ElectrodeLayout::custom;
    for (Region r : regions) {
        r.box.rho_min += g.ring_radius;
        r.box.rho_max += g.ring_radius;
        g.regions.push_back(r);
    }
    return g;
}

Polarization GeometrySettings::resolved_polarization() const
{
    if (polarization)
        return *polarization;
    return preset ? preset_polarization(*preset) : Polarization::TE;
}

MaterialLibrary RunConfig::library() const
{
    MaterialLibrary lib = MaterialLibrary::defaults();
    if (!material_file.empty())
        for (auto& m : load_material_file(material_file))
            lib.add(m);
    for (const auto& m : materials_defined)
        lib.add(m);
    return lib;
}

double RunConfig::target_wavelength() const
{
    return solver.target_wavelength.value_or(kSpeedOfLight / converter.optical_frequency);
}

ConverterParams RunConfig::converter_params(double g0) const
{
    const auto& c = converter;
    ConverterParams p = ConverterParams::from_quality_factors(
        to_angular(c.optical_frequency), c.optical_q, c.optical_coupling_ratio, to_angular(c.microwave_frequency),
        c.microwave_q, c.microwave_coupling_ratio, g0);
    p.topology = c.topology;
    p.thermal_occupation = c.thermal_occupation;
    if (c.pump_power)
        p.pump_power = c.pump_power;
    else if (c.photon_number)
        p.photon_number = c.photon_number;
    else if (g0 > 0.0)
        p.pump_power = pump_power_for_cooperativity(1.0, p, c.topology);
    else
        p.photon_number = 0.0;
    return p;
}

RunConfig parse_config(const std::string& text, const std::string& origin, const std::string& base_dir)
{
    const Ctx ctx{origin};
    const YAML::Node root = load_yaml(text, origin);
    if (!root || root.IsNull())
        throw ConfigError(origin + ": empty configuration");
    if (!root.IsMap())
        ctx.fail(root, "configuration must be a mapping");

    // A run report embeds its configuration under "config".
    if (root["config"] && root["report_version"])
        return parse_config(YAML::Dump(root["config"]), origin + "#config", base_dir);

    ctx.keys(root, "<root>", {"version", "materials", "geometry", "solver", "converter", "output"});
    RunConfig cfg;
    cfg.source = origin;
    if (const auto v = root["version"]) {
        cfg.version = ctx.integer(v, "version");
        if (cfg.version != kConfigVersion)
            ctx.fail(v, "unsupported config version " + std::to_string(cfg.version));
    }
    if (const auto m = root["materials"]) {
        ctx.keys(m, "materials", {"file", "define"});
        if (const auto f = m["file"]) {
            fs::path p = ctx.text(f, "file");
            if (p.is_relative())
                p = fs::path(base_dir) / p;
            cfg.material_file = p.lexically_normal().string();
            try {
                (void)load_material_file(cfg.material_file);
            } catch (const ConfigError& e) {
                ctx.fail(f, e.what());
            }
        }
        if (const auto d = m["define"])
            cfg.materials_defined = materials_from_list(ctx, d);
    }
    if (!root["geometry"])
        ctx.fail(root, "missing section 'geometry'");
    parse_geometry(ctx, root["geometry"], cfg.geometry);
    if (const auto s = root["solver"])
        parse_solver(ctx, s, cfg.solver);
    if (const auto c = root["converter"])
        parse_converter(ctx, c, cfg.converter);
    if (const auto o = root["output"])
        parse_output(ctx, o, cfg.output);

    // cross-section checks that need the material library
    try {
        const auto lib = cfg.library();
        cfg.geometry.resolve().validate(lib);
    } catch (const GeometryError& e) {
        ctx.fail(root["geometry"], e.what());
    } catch (const ConfigError& e) {
        ctx.fail(root["geometry"], e.what());
    }
    const double lambda = cfg.target_wavelength();
    if (!(lambda >= 0.4e-6 && lambda <= 5e-6))
        ctx.fail(root, "optical wavelength " + std::to_string(lambda * 1e6) + " um outside the validated 0.4-5 um range");
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    if (!fs::exists(path))
        throw ConfigError("configuration file not found: '" + path + "'");
    const auto base = fs::path(path).parent_path();
    return parse_config(read_file(path), path, base.empty() ? "." : base.string());
}

RunConfig preset_config(Preset preset)
{
    RunConfig cfg;
    cfg.geometry.preset = preset;
    cfg.source = std::string("preset ") + std::string(preset_name(preset));
    return cfg;
}

std::vector<Material> load_material_file(const std::string& path)
{
    const Ctx ctx{path};
    const YAML::Node root = load_yaml(read_file(path), path);
    if (!root.IsMap())
        ctx.fail(root, "material file must be a mapping with a 'define' list");
    ctx.keys(root, "<material file>", {"version", "define"});
    if (!root["define"])
        ctx.fail(root, "material file needs a 'define' list");
    return materials_from_list(ctx, root["define"]);
}

void set_parameter(RunConfig& config, const std::string& path, double si_value)
{
    const auto& t = parameter_table();
    const auto it = t.find(path);
    if (it == t.end())
        throw ConfigError("unknown parameter path '" + path + "'");
    it->second.set(config, si_value);
}

double get_parameter(const RunConfig& config, const std::string& path)
{
    const auto& t = parameter_table();
    const auto it = t.find(path);
    if (it == t.end())
        throw ConfigError("unknown parameter path '" + path + "'");
    return it->second.get(config);
}

Dimension parameter_dimension(const std::string& path)
{
    const auto& t = parameter_table();
    const auto it = t.find(path);
    if (it == t.end())
        throw ConfigError("unknown parameter path '" + path + "'");
    return it->second.dim;
}

std::vector<std::string> parameter_paths()
{
    std::vector<std::string> out;
    for (const auto& [k, v] : parameter_table())
        out.push_back(k);
    return out;
}

} // namespace eoconv
