#include "eoconv/report.hpp"

#include "eoconv/constants.hpp"
#include "eoconv/errors.hpp"
#include "eoconv/field_io.hpp"
#include "eoconv/units.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace eoconv
{
namespace
{

using nlohmann::json;
namespace fs = std::filesystem;

json q(double v, const char* unit)
{
    json j;
    j["value"] = std::isfinite(v) ? json(v) : json(nullptr);
    j["unit"] = unit;
    if (!std::isfinite(v))
        j["note"] = std::isnan(v) ? "undefined" : (v > 0 ? "infinite" : "-infinite");
    return j;
}

json hz(double rad_per_s) { return q(to_hz(rad_per_s), "Hz"); }

std::string quantity(double si, Dimension d) { return format_quantity(si, d); }

json tensor(const Matrix3& m)
{
    json rows = json::array();
    for (int i = 0; i < 3; ++i)
        rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
    return rows;
}

json material_json(const Material& m)
{
    json j;
    j["name"] = m.name();
    j["eps_optical"] = tensor(m.eps_optical());
    j["eps_microwave"] = tensor(m.eps_microwave());
    j["refractive_index"] = m.refractive_index();
    json rows = json::array();
    char buf[64];
    for (int i = 0; i < 6; ++i) {
        json row = json::array();
        for (int k = 0; k < 3; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g pm/V", m.r_contracted()(i, k));
            row.push_back(buf);
        }
        rows.push_back(row);
    }
    j["pockels"] = rows;
    return j;
}

json config_to_json(const RunConfig& c)
{
    json j;
    j["version"] = c.version;

    json defs = json::array();
    if (!c.material_file.empty())
        for (const auto& m : load_material_file(c.material_file))
            defs.push_back(material_json(m));
    for (const auto& m : c.materials_defined)
        defs.push_back(material_json(m));
    if (!defs.empty())
        j["materials"]["define"] = defs;

    json g;
    const auto& gs = c.geometry;
    const auto& o = gs.overrides;
    if (gs.preset)
        g["preset"] = std::string(preset_name(*gs.preset));
    if (gs.polarization)
        g["polarization"] = std::string(polarization_name(*gs.polarization));
    auto len = [&](const char* key, const std::optional<double>& v) {
        if (v)
            g[key] = quantity(*v, Dimension::length);
    };
    len("electrode_gap", o.electrode_gap);
    len("ring_radius", o.ring_radius);
    len("vacuum_margin", o.vacuum_margin);
    len("microstrip_length", o.microstrip_length);
    if (o.azimuthal_coverage)
        g["azimuthal_coverage"] = *o.azimuthal_coverage;
    if (o.energy_fraction)
        g["energy_fraction"] = *o.energy_fraction;
    if (gs.preset) {
        len("core_width", o.core_width);
        len("core_height", o.core_height);
        len("electrode_width", o.electrode_width);
        len("electrode_thickness", o.electrode_thickness);
        len("electrode_offset", o.electrode_offset);
        if (o.drive_voltage)
            g["drive_voltage"] = quantity(*o.drive_voltage, Dimension::voltage);
        g["core_material"] = o.core_material;
        g["cladding_material"] = o.cladding_material;
    } else {
        json regions = json::array();
        for (const auto& r : gs.regions) {
            json jr;
            jr["name"] = r.name;
            jr["role"] = std::string(role_name(r.role));
            jr["material"] = r.material;
            jr["rho"] = {quantity(r.box.rho_min, Dimension::length), quantity(r.box.rho_max, Dimension::length)};
            jr["z"] = {quantity(r.box.z_min, Dimension::length), quantity(r.box.z_max, Dimension::length)};
            if (r.role == RegionRole::electrode)
                jr["potential"] = quantity(r.potential, Dimension::voltage);
            regions.push_back(jr);
        }
        g["regions"] = regions;
    }
    j["geometry"] = g;

    const auto& s = c.solver;
    json js;
    js["resolution"] = quantity(s.resolution, Dimension::inverse_length);
    js["tolerance"] = s.tolerance;
    js["eigen_tolerance"] = s.eigen_tolerance;
    js["n_phi"] = s.n_phi;
    if (s.target_wavelength)
        js["target_wavelength"] = quantity(*s.target_wavelength, Dimension::length);
    if (s.azimuthal_number)
        js["azimuthal_number"] = *s.azimuthal_number;
    js["m_scan"] = s.m_scan;
    js["confinement"] = s.confinement;
    j["solver"] = js;

    const auto& cv = c.converter;
    json jc;
    jc["optical_frequency"] = quantity(cv.optical_frequency, Dimension::frequency);
    jc["microwave_frequency"] = quantity(cv.microwave_frequency, Dimension::frequency);
    jc["optical_q"] = cv.optical_q;
    jc["microwave_q"] = cv.microwave_q;
    jc["optical_coupling_ratio"] = cv.optical_coupling_ratio;
    jc["microwave_coupling_ratio"] = cv.microwave_coupling_ratio;
    jc["thermal_occupation"] = cv.thermal_occupation;
    jc["topology"] = std::string(topology_name(cv.topology));
    if (cv.pump_power)
        jc["pump_power"] = quantity(*cv.pump_power, Dimension::power);
    if (cv.photon_number)
        jc["photon_number"] = *cv.photon_number;
    if (cv.g0_override)
        jc["g0_override"] = quantity(*cv.g0_override, Dimension::frequency);
    j["converter"] = jc;

    json jo;
    if (!c.output.directory.empty())
        jo["directory"] = c.output.directory;
    jo["formats"] = c.output.formats;
    jo["persist_fields"] = c.output.persist_fields;
    jo["timestamps"] = c.output.timestamps;
    j["output"] = jo;
    return j;
}

json coherence_json(const std::vector<CoherenceCheck>& checks)
{
    json a = json::array();
    for (const auto& c : checks) {
        json x;
        x["name"] = c.name;
        x["ratio"] = q(c.ratio, "1");
        x["flag"] = std::string(flag_name(c.flag));
        x["note"] = c.note;
        a.push_back(x);
    }
    return a;
}

json report_to_json(const RunReport& r)
{
    json j;
    j["report_version"] = kReportVersion;
    j["config"] = config_to_json(r.config);

    json prov;
    prov["version"] = r.version;
    prov["source"] = r.config.source;
    prov["grid_hash"] = r.grid_hash;
    if (r.timestamp)
        prov["timestamp"] = *r.timestamp;
    j["provenance"] = prov;

    if (r.grid_n_rho > 0) {
        j["grid"]["n_rho"] = q(r.grid_n_rho, "1");
        j["grid"]["n_z"] = q(r.grid_n_z, "1");
        j["grid"]["spacing"] = q(r.grid_spacing, "m");
    }

    if (r.potential) {
        const auto& p = *r.potential;
        json jp;
        jp["applied_voltage"] = q(p.applied_voltage, "V");
        jp["capacitance"] = q(p.capacitance, "F");
        jp["capacitance_from_charge"] = q(p.capacitance_charge, "F");
        jp["energy_per_unit_length"] = q(p.energy_per_unit_length, "J/m");
        jp["v_zpf"] = q(p.v_zpf, "V");
        jp["residual"] = q(p.residual, "1");
        jp["iterations"] = q(p.iterations, "1");
        jp["unit_drive_capacitance"] = p.unit_drive;
        j["potential"] = jp;
    } else {
        j["potential"] = nullptr;
    }

    if (r.mode) {
        const auto& m = *r.mode;
        json jm;
        jm["omega_a"] = hz(m.omega);
        jm["wavelength"] = q(kTwoPi * kSpeedOfLight / m.omega, "m");
        jm["m"] = q(m.m, "1");
        jm["polarization"] = std::string(polarization_name(m.polarization));
        jm["n_eff"] = q(m.n_eff, "1");
        jm["fsr"] = hz(m.fsr);
        jm["round_trip_time"] = q(m.tau, "s");
        jm["energy"] = q(1.0, "J");
        jm["eigen_residual"] = q(m.residual, "1");
        jm["boundary_energy_ratio"] = q(m.boundary_ratio, "1");
        j["mode"] = jm;
    } else {
        j["mode"] = nullptr;
    }

    json jc;
    jc["g0"] = hz(r.coupling.g0);
    jc["g0_source"] = r.g0_injected ? "injected" : std::string(coupling_method_name(r.coupling.method));
    jc["sign"] = q(r.coupling.sign, "1");
    jc["delta_omega_per_volt"] = q(to_hz(r.coupling.delta_omega_per_volt), "Hz/V");
    jc["v_zpf"] = q(r.coupling.v_zpf, "V");
    jc["inputs"]["mode_id"] = r.coupling.inputs.mode_id;
    jc["inputs"]["field_id"] = r.coupling.inputs.field_id;
    jc["inputs"]["capacitance"] = q(r.coupling.inputs.capacitance, "F");
    jc["inputs"]["omega_b"] = hz(r.coupling.inputs.omega_b);
    jc["inputs"]["f_phi"] = q(r.coupling.inputs.f_phi, "1");
    jc["inputs"]["n_phi"] = q(r.coupling.inputs.n_phi, "1");
    jc["dropped_terms"] = r.coupling.dropped_terms;
    j["coupling"] = jc;

    if (r.diagnostics) {
        const auto& d = *r.diagnostics;
        json jd;
        jd["g0_closed_form"] = hz(d.closed_form);
        jd["g0_generic_form"] = hz(d.generic_form);
        jd["mode_volume"] = q(d.mode_volume, "m^3");
        jd["r_effective"] = q(d.r_effective, "m/V");
        j["diagnostics"] = jd;
    }

    const auto& p = r.params;
    const auto& cv = r.conversion;
    json jv;
    jv["params"]["omega_a"] = hz(p.omega_a);
    jv["params"]["omega_b"] = hz(p.omega_b);
    jv["params"]["kappa_a_in"] = hz(p.kappa_a_in);
    jv["params"]["kappa_a_ex"] = hz(p.kappa_a_ex);
    jv["params"]["kappa_b_in"] = hz(p.kappa_b_in);
    jv["params"]["kappa_b_ex"] = hz(p.kappa_b_ex);
    jv["params"]["g0"] = hz(p.g0);
    jv["params"]["topology"] = std::string(topology_name(p.topology));
    jv["params"]["thermal_occupation"] = q(p.thermal_occupation, "quanta");
    jv["params"]["pump_input"] = p.pump_power ? "pump_power" : "photon_number";
    jv["C0"] = q(cv.C0, "1");
    jv["C"] = q(cv.C, "1");
    jv["photon_number"] = q(cv.photon_number, "1");
    jv["pump_power"] = q(cv.pump_power, "W");
    jv["gamma_peak"] = q(cv.gamma_peak, "1");
    jv["bandwidth_fwhm"] = hz(cv.fwhm);
    jv["P_single_mode_C1"] = q(cv.p_single, "W");
    jv["P_dual_mode_C1"] = q(cv.p_dual, "W");
    jv["n_eq"] = cv.n_eq ? q(*cv.n_eq, "quanta") : json(nullptr);
    jv["coherence"] = coherence_json(cv.coherence);
    j["converter"] = jv;
    j["warnings"] = r.warnings;
    return j;
}

std::string unit_of(Dimension d) { return std::string(si_unit(d)); }

} // namespace

std::string config_json(const RunConfig& config) { return config_to_json(config).dump(2); }

std::string report_json(const RunReport& report) { return report_to_json(report).dump(2) + "\n"; }

std::string report_csv(const RunReport& report)
{
    const json j = report_to_json(report);
    std::ostringstream os;
    os << "key,value,unit\n";
    char buf[64];
    // leaves of the form {"value", "unit"} outside the config snapshot
    std::function<void(const json&, const std::string&)> walk = [&](const json& node, const std::string& prefix) {
        if (node.is_object()) {
            if (node.contains("value") && node.contains("unit")) {
                os << prefix << ",";
                if (node["value"].is_number()) {
                    std::snprintf(buf, sizeof buf, "%.17g", node["value"].get<double>());
                    os << buf;
                }
                os << "," << node["unit"].get<std::string>() << "\n";
                return;
            }
            for (auto it = node.begin(); it != node.end(); ++it)
                walk(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
        } else if (node.is_array()) {
            for (std::size_t i = 0; i < node.size(); ++i)
                walk(node[i], prefix + "[" + std::to_string(i) + "]");
        }
    };
    for (const char* section : {"grid", "potential", "mode", "coupling", "diagnostics", "converter"})
        if (j.contains(section))
            walk(j[section], section);
    return os.str();
}

std::string gamma_curve_csv(const RunReport& report)
{
    std::ostringstream os;
    os << "offset_from_omega_b[Hz],gamma[1]\n";
    char buf[96];
    const auto& c = report.conversion;
    for (std::size_t k = 0; k < c.curve_omega.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", to_hz(c.curve_omega[k] - report.params.omega_b), c.curve_gamma[k]);
        os << buf;
    }
    return os.str();
}

std::string report_text(const RunReport& r)
{
    std::ostringstream os;
    auto sig = [](double v) { return format_significant(v, 4); };
    os << "eoconv " << r.version << " run report (" << r.config.source << ")\n";
    if (!r.grid_hash.empty())
        os << "  grid           " << r.grid_n_rho << " x " << r.grid_n_z << " cells, h = " << sig(r.grid_spacing * 1e9)
           << " nm, hash " << r.grid_hash << "\n";
    if (r.potential) {
        os << "  capacitance    " << sig(r.potential->capacitance * 1e15) << " fF (charge estimate "
           << sig(r.potential->capacitance_charge * 1e15) << " fF)\n";
        os << "  V_zpf          " << sig(r.potential->v_zpf * 1e6) << " uV\n";
    }
    if (r.mode) {
        os << "  optical mode   " << polarization_name(r.mode->polarization) << " m = " << r.mode->m
           << ", omega_a/2pi = " << sig(to_hz(r.mode->omega) / 1e12) << " THz, n_eff = " << sig(r.mode->n_eff)
           << ", FSR/2pi = " << sig(to_hz(r.mode->fsr) / 1e9) << " GHz\n";
    }
    os << "  g0/2pi         " << sig(to_hz(r.coupling.g0) / 1e3) << " kHz" << (r.g0_injected ? " (injected)" : "")
       << "\n";
    if (r.diagnostics)
        os << "  closed forms   " << sig(to_hz(r.diagnostics->closed_form) / 1e3) << " kHz (mode volume), "
           << sig(to_hz(r.diagnostics->generic_form) / 1e3) << " kHz (generic)\n";
    const auto& c = r.conversion;
    os << "  C0             " << format_significant(c.C0, 3) << "\n";
    os << "  C              " << format_significant(c.C, 3) << " (n_p = " << format_significant(c.photon_number, 3)
       << ", P = " << format_significant(c.pump_power, 3) << " W)\n";
    os << "  gamma peak     " << sig(c.gamma_peak) << ", FWHM/2pi = " << sig(to_hz(c.fwhm) / 1e6) << " MHz\n";
    if (c.C0 > 0)
        os << "  P(C=1)         single " << format_significant(c.p_single, 3) << " W, dual "
           << format_significant(c.p_dual, 3) << " W\n";
    os << "  n_eq           " << (c.n_eq ? sig(*c.n_eq) : std::string("undefined")) << "\n";
    for (const auto& ch : c.coherence)
        os << "  check " << ch.name << ": " << flag_name(ch.flag) << " (ratio " << format_significant(ch.ratio, 3)
           << ")\n";
    for (const auto& w : r.warnings)
        os << "  warning: " << w << "\n";
    return os.str();
}

const char* objective_unit(Objective o) noexcept
{
    switch (o) {
    case Objective::g0: return "Hz";
    case Objective::P_for_C1: return "W";
    case Objective::n_eq: return "quanta";
    default: return "1";
    }
}

double objective_display(Objective o, double v) { return o == Objective::g0 ? to_hz(v) : v; }

std::string sweep_csv(const SweepResult& res)
{
    std::ostringstream os;
    const std::string unit = unit_of(parameter_dimension(res.spec.parameter));
    const char* obj_unit = objective_unit(res.spec.objective);
    os << "index," << res.spec.parameter << "[" << unit << "]," << objective_name(res.spec.objective) << "["
       << obj_unit << "],status,report_id\n";
    char buf[128];
    for (const auto& p : res.points) {
        const double v = objective_display(res.spec.objective, p.objective.value_or(std::nan("")));
        std::snprintf(buf, sizeof buf, "%d,%.17g,", p.index, p.value);
        os << buf;
        if (p.objective) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << buf;
        }
        std::string status = p.status;
        for (char& ch : status)
            if (ch == ',' || ch == '\n')
                ch = ';';
        os << "," << status << "," << p.report_id << "\n";
    }
    return os.str();
}

std::string sweep_manifest_json(const SweepResult& res, const RunConfig& config,
                                const std::optional<ScalarOptimum>& optimum)
{
    json j;
    j["manifest_version"] = 1;
    j["config"] = config_to_json(config);
    j["spec"]["parameter"] = res.spec.parameter;
    const Dimension d = parameter_dimension(res.spec.parameter);
    j["spec"]["lo"] = format_quantity(res.spec.lo, d);
    j["spec"]["hi"] = format_quantity(res.spec.hi, d);
    j["spec"]["points"] = res.spec.points;
    j["spec"]["sampling"] = std::string(sampling_name(res.spec.sampling));
    j["spec"]["objective"] = std::string(objective_name(res.spec.objective));
    j["failures"] = res.failures;
    json pts = json::array();
    for (const auto& p : res.points) {
        json x;
        x["index"] = p.index;
        x["value"] = q(p.value, std::string(si_unit(d)).c_str());
        x["status"] = p.status;
        x["report_id"] = p.report_id;
        if (p.objective)
            x["objective"] = q(objective_display(res.spec.objective, *p.objective), objective_unit(res.spec.objective));
        if (p.report)
            x["report"] = report_to_json(*p.report);
        pts.push_back(x);
    }
    j["points"] = pts;
    if (optimum) {
        j["optimum"]["x"] = q(optimum->x, std::string(si_unit(d)).c_str());
        j["optimum"]["objective"] = q(objective_display(res.spec.objective, optimum->value), objective_unit(res.spec.objective));
        j["optimum"]["flat"] = optimum->flat;
        j["optimum"]["refined"] = optimum->refined;
        j["optimum"]["evaluations"] = optimum->evaluations;
    }
    return j.dump(2) + "\n";
}

std::string default_output_dir(const RunConfig& config)
{
    if (!config.output.directory.empty())
        return config.output.directory;
    if (const char* env = std::getenv("EOCONV_OUTPUT_DIR"); env && *env)
        return env;
    return "eoconv-out";
}

void write_text_file(const std::string& path, const std::string& contents)
{
    const fs::path p(path);
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot write '" + path + "'");
    f << contents;
}

std::vector<std::string> write_report(const RunReport& report, const std::string& directory,
                                      const std::vector<std::string>& formats, const std::string& stem)
{
    fs::create_directories(directory);
    std::vector<std::string> written;
    const fs::path base = fs::path(directory) / stem;
    for (const auto& f : formats) {
        if (f == "json") {
            write_text_file(base.string() + ".json", report_json(report));
            written.push_back(base.string() + ".json");
        } else if (f == "csv") {
            write_text_file(base.string() + ".csv", report_csv(report));
            write_text_file(base.string() + "_gamma.csv", gamma_curve_csv(report));
            written.push_back(base.string() + ".csv");
            written.push_back(base.string() + "_gamma.csv");
        } else if (f == "text") {
            write_text_file(base.string() + ".txt", report_text(report));
            written.push_back(base.string() + ".txt");
        } else {
            throw ConfigError("unknown output format '" + f + "'");
        }
    }
    if (report.config.output.persist_fields) {
        if (report.potential_field) {
            write_potential_grid(base.string() + "_potential.dat", *report.potential_field);
            written.push_back(base.string() + "_potential.dat");
        }
        if (report.mode_solution) {
            write_mode_grid(base.string() + "_mode.dat", *report.mode_solution);
            written.push_back(base.string() + "_mode.dat");
        }
    }
    return written;
}

} // namespace eoconv
