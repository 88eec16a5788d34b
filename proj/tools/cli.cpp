#include "cli.hpp"

#include "eoconv/constants.hpp"
#include "eoconv/errors.hpp"
#include "eoconv/optical_modes.hpp"
#include "eoconv/pipeline.hpp"
#include "eoconv/report.hpp"
#include "eoconv/sweep.hpp"
#include "eoconv/units.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace eoconv
{
namespace
{

struct Common
{
    std::string output_dir;
    std::string format;
    int jobs = 1;
    bool verbose = false;
};

struct Log
{
    std::ostream& err;
    bool on;
    template <class T>
    Log& operator<<(const T& v)
    {
        if (on)
            err << v;
        return *this;
    }
};

RunConfig load_with_preset(const std::string& path, const std::string& preset)
{
    RunConfig cfg;
    if (!path.empty()) {
        cfg = load_config(path);
        if (!preset.empty()) {
            if (!cfg.geometry.preset)
                throw ConfigError("--preset given but '" + path + "' defines explicit regions");
            cfg.geometry.preset = parse_preset(preset);
        }
    } else if (!preset.empty()) {
        cfg = preset_config(parse_preset(preset));
    } else {
        throw ConfigError("a configuration file or --preset is required");
    }
    return cfg;
}

std::vector<std::string> formats_for(const Common& c, const RunConfig& cfg)
{
    if (!c.format.empty())
        return {c.format};
    return cfg.output.formats;
}

std::string output_dir_for(const Common& c, const RunConfig& cfg)
{
    return c.output_dir.empty() ? default_output_dir(cfg) : c.output_dir;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_check(const std::string& path, const std::string& preset, std::ostream& out)
{
    const RunConfig cfg = load_with_preset(path, preset);
    const auto geom = cfg.geometry.resolve();
    (void)geom;
    out << "ok: " << cfg.source << " ("
        << (cfg.geometry.preset ? std::string(preset_name(*cfg.geometry.preset)) : std::string("explicit regions"))
        << ", " << polarization_name(cfg.geometry.resolved_polarization()) << ")\n";
    return exit_ok;
}

int cmd_run(const std::string& path, const std::string& preset, const Common& c, std::ostream& out, Log& log)
{
    const RunConfig cfg = load_with_preset(path, preset);
    const auto t0 = std::chrono::steady_clock::now();
    log << "run: " << cfg.source << "\n";
    const RunReport report = run_pipeline(cfg);
    log << "pipeline finished in " << seconds_since(t0) << " s\n";
    const auto dir = output_dir_for(c, cfg);
    const auto formats = formats_for(c, cfg);
    for (const auto& f : write_report(report, dir, formats))
        log << "wrote " << f << "\n";
    if (c.format == "json")
        out << report_json(report);
    else if (c.format == "csv")
        out << report_csv(report);
    else
        out << report_text(report);
    return exit_ok;
}

int cmd_table1(bool inject, const Common& c, std::ostream& out, Log& log)
{
    const std::vector<Preset> presets{Preset::G1, Preset::G2, Preset::G3, Preset::G4};
    std::vector<RunReport> reports(presets.size());
    FieldCache cache;
    parallel_for(static_cast<int>(presets.size()), inject ? 1 : c.jobs, [&](int i) {
        RunOptions ro;
        ro.cache = &cache;
        reports[i] = run_pipeline(table1_config(presets[i], inject), ro);
    });
    for (const auto& r : reports)
        for (const auto& w : r.warnings)
            log << preset_name(*r.config.geometry.preset) << ": " << w << "\n";
    const std::string text = emit_table1(reports);
    const std::string csv = emit_table1_csv(reports);
    if (c.format == "csv")
        out << csv;
    else
        out << text;
    if (!c.output_dir.empty()) {
        write_text_file((std::filesystem::path(c.output_dir) / "table1.txt").string(), text);
        write_text_file((std::filesystem::path(c.output_dir) / "table1.csv").string(), csv);
    }
    return exit_ok;
}

int cmd_match_fsr(const std::string& path, const std::string& preset, const Common& c, std::ostream& out)
{
    const RunConfig cfg = load_with_preset(path, preset);
    const auto geom = cfg.geometry.resolve();
    ModeOptions mo;
    mo.tolerance = cfg.solver.eigen_tolerance;
    mo.confinement = cfg.solver.confinement;
    mo.m_scan_half_width = cfg.solver.m_scan;
    const double wb = to_angular(cfg.converter.microwave_frequency);
    const auto res = match_fsr(geom, cfg.library(), cfg.solver.resolution, cfg.geometry.resolved_polarization(), wb,
                               cfg.target_wavelength(), {}, mo);
    char buf[640];
    if (c.format == "json") {
        std::snprintf(buf, sizeof buf,
                      "{\n  \"ring_radius\": {\"value\": %.17g, \"unit\": \"m\"},\n"
                      "  \"fsr\": {\"value\": %.17g, \"unit\": \"Hz\"},\n"
                      "  \"microwave_frequency\": {\"value\": %.17g, \"unit\": \"Hz\"},\n"
                      "  \"m\": {\"value\": %d, \"unit\": \"1\"},\n"
                      "  \"evaluations\": {\"value\": %d, \"unit\": \"1\"}\n}\n",
                      res.radius, to_hz(res.fsr), cfg.converter.microwave_frequency, res.m, res.evaluations);
    } else if (c.format == "csv") {
        std::snprintf(buf, sizeof buf, "key,value,unit\nring_radius,%.17g,m\nfsr,%.17g,Hz\nm,%d,1\nevaluations,%d,1\n",
                      res.radius, to_hz(res.fsr), res.m, res.evaluations);
    } else {
        std::snprintf(buf, sizeof buf,
                      "ring radius %.6g um: FSR/2pi = %.6g GHz (target %.6g GHz), m = %d, %d mode solves\n",
                      res.radius * 1e6, to_hz(res.fsr) / 1e9, cfg.converter.microwave_frequency / 1e9, res.m,
                      res.evaluations);
    }
    out << buf;
    return exit_ok;
}

struct SweepArgs
{
    std::string param;
    std::vector<std::string> range;
    int points = 11;
    std::string sampling = "linear";
    std::string objective = "g0";
    bool optimize = false;
    bool min_gap = false;
};

int cmd_sweep(const std::string& path, const std::string& preset, const SweepArgs& a, const Common& c,
              std::ostream& out, Log& log)
{
    const RunConfig cfg = load_with_preset(path, preset);
    SweepSpec spec;
    spec.parameter = a.param;
    const Dimension dim = parameter_dimension(a.param);
    if (a.range.size() != 2)
        throw ConfigError("--range takes two values");
    spec.lo = parse_quantity(a.range[0], dim);
    spec.hi = parse_quantity(a.range[1], dim);
    spec.points = a.points;
    spec.sampling = parse_sampling(a.sampling);
    spec.objective = parse_objective(a.objective);
    spec.validate();

    FieldCache cache;
    SweepOptions so;
    so.jobs = c.jobs;
    so.cache = &cache;
    if (a.min_gap) {
        if (a.param != "geometry.electrode_gap")
            throw ConfigError("--min-gap only applies to geometry.electrode_gap");
        so.lower_bound = feasible_gap_lower_bound(cfg, &cache);
        log << "feasible gap lower bound " << *so.lower_bound << " m\n";
    }

    const auto t0 = std::chrono::steady_clock::now();
    SweepResult result;
    std::optional<ScalarOptimum> optimum;
    std::shared_ptr<const RunReport> best_report;
    if (a.optimize) {
        auto opt = optimize_scalar(cfg, spec, so);
        result = std::move(opt.sweep);
        optimum = opt.optimum;
        best_report = opt.report;
    } else {
        result = sweep(cfg, spec, so);
    }
    log << "sweep: " << result.points.size() << " points, " << result.failures << " failed, "
        << seconds_since(t0) << " s, cache hits " << cache.hits() << "\n";

    const auto dir = output_dir_for(c, cfg);
    const auto csv = sweep_csv(result);
    write_text_file((std::filesystem::path(dir) / "sweep.csv").string(), csv);
    write_text_file((std::filesystem::path(dir) / "sweep_manifest.json").string(),
                    sweep_manifest_json(result, cfg, optimum));
    if (best_report)
        write_report(*best_report, dir, {"json"}, "optimum");

    if (c.format == "json") {
        out << sweep_manifest_json(result, cfg, optimum);
    } else {
        out << csv;
        if (optimum) {
            std::ostringstream os;
            os.precision(10);
            os << "optimum " << spec.parameter << " = " << format_quantity(optimum->x, dim) << ", "
               << objective_name(spec.objective) << " = " << objective_display(spec.objective, optimum->value) << " "
               << objective_unit(spec.objective) << (optimum->flat ? " (flat)" : "")
               << "\n";
            out << os.str();
        }
    }
    return exit_ok;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"eoconv - electro-optic microwave-to-optical converter simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    Common c;
    app.add_option("--output-dir", c.output_dir, "Output directory (default: config, then $EOCONV_OUTPUT_DIR)");
    app.add_option("--format", c.format, "Report format")->check(CLI::IsMember({"csv", "json", "text"}));
    app.add_option("--jobs", c.jobs, "Worker threads for sweeps and table runs")->check(CLI::PositiveNumber);
    app.add_flag("--verbose,-v", c.verbose, "Progress and diagnostics on stderr");
    app.set_version_flag("--version", std::string(library_version()));

    std::string path;
    std::string preset;
    auto add_config = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("config", path, "Configuration file (YAML)");
        if (required)
            o->required();
        sub->add_option("--preset", preset, "Geometry preset (G1..G4)")
            ->check(CLI::IsMember({"G1", "G2", "G3", "G4", "g1", "g2", "g3", "g4"}));
    };

    auto* run = app.add_subcommand("run", "Full pipeline: fields, coupling, converter figures");
    add_config(run, false);
    auto* check = app.add_subcommand("check", "Validate a configuration without solving");
    add_config(check, false);
    auto* mfsr = app.add_subcommand("match-fsr", "Ring radius whose FSR equals the microwave frequency");
    add_config(mfsr, false);

    SweepArgs sa;
    auto* sw = app.add_subcommand("sweep", "Parameter sweep (optionally with golden-section refinement)");
    add_config(sw, false);
    sw->add_option("--param", sa.param, "Dotted parameter path, e.g. geometry.electrode_gap")->required();
    sw->add_option("--range", sa.range, "Range endpoints with units, e.g. 2um 10um")->expected(2)->required();
    sw->add_option("--points", sa.points, "Sample count")->check(CLI::Range(2, 100000));
    sw->add_option("--sampling", sa.sampling, "linear | log")->check(CLI::IsMember({"linear", "log"}));
    sw->add_option("--objective", sa.objective, "g0 | C0 | gamma_peak | P_for_C1 | n_eq")
        ->check(CLI::IsMember({"g0", "C0", "gamma_peak", "P_for_C1", "n_eq"}));
    sw->add_flag("--optimize", sa.optimize, "Refine the best sample by golden section");
    sw->add_flag("--min-gap", sa.min_gap, "Skip gaps inside the 40 dB optical contour");

    bool inject = false;
    auto* t1 = app.add_subcommand("table1", "Four-geometry comparison table");
    t1->add_flag("--inject-g0", inject, "Use the tabulated g0 values instead of field solves");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return exit_config;
    }

    Log log{err, c.verbose};
    try {
        if (*check)
            return cmd_check(path, preset, out);
        if (*run)
            return cmd_run(path, preset, c, out, log);
        if (*mfsr)
            return cmd_match_fsr(path, preset, c, out);
        if (*sw)
            return cmd_sweep(path, preset, sa, c, out, log);
        if (*t1)
            return cmd_table1(inject, c, out, log);
    } catch (const StageError& e) {
        err << "error: " << e.what() << "\n";
        return e.is_config_error() ? exit_config : exit_failure;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return exit_config;
    } catch (const GeometryError& e) {
        err << "geometry error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_config;
}

} // namespace eoconv
