#include "eoconv/pipeline.hpp"

#include "eoconv/constants.hpp"
#include "eoconv/errors.hpp"
#include "eoconv/hash.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#ifndef EOCONV_VERSION
#define EOCONV_VERSION "0.0.0"
#endif

namespace eoconv
{

const char* library_version() noexcept { return EOCONV_VERSION; }

std::shared_ptr<const PotentialField> FieldCache::potential(std::uint64_t key) const
{
    std::lock_guard lock(mutex_);
    const auto it = potentials_.find(key);
    return it == potentials_.end() ? nullptr : it->second;
}

std::shared_ptr<const ModeSolution> FieldCache::mode(std::uint64_t key) const
{
    std::lock_guard lock(mutex_);
    const auto it = modes_.find(key);
    return it == modes_.end() ? nullptr : it->second;
}

std::shared_ptr<const PotentialField> FieldCache::put(std::uint64_t key, std::shared_ptr<const PotentialField> v)
{
    std::lock_guard lock(mutex_);
    return potentials_.emplace(key, std::move(v)).first->second;
}

std::shared_ptr<const ModeSolution> FieldCache::put(std::uint64_t key, std::shared_ptr<const ModeSolution> v)
{
    std::lock_guard lock(mutex_);
    return modes_.emplace(key, std::move(v)).first->second;
}

std::size_t FieldCache::hits() const
{
    std::lock_guard lock(mutex_);
    return hits_;
}

std::size_t FieldCache::misses() const
{
    std::lock_guard lock(mutex_);
    return misses_;
}

void FieldCache::count(bool hit) const
{
    std::lock_guard lock(mutex_);
    ++(hit ? hits_ : misses_);
}

namespace
{

template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const ConfigError& e) {
        throw StageError(name, e.what(), true);
    } catch (const GeometryError& e) {
        throw StageError(name, e.what(), true);
    } catch (const std::exception& e) {
        throw StageError(name, e.what(), false);
    }
}

std::uint64_t potential_key(const StructuredGrid& g, const std::map<std::string, double>& potentials,
                            const ElectrostaticOptions& opt)
{
    Fnv1a h;
    h.add(std::string_view("potential"));
    h.add(static_cast<std::int64_t>(g.content_hash()));
    for (const auto& [name, v] : potentials) {
        h.add(name);
        h.add(v);
    }
    h.add(opt.tolerance);
    return h.value();
}

std::uint64_t mode_key(const StructuredGrid& g, Polarization pol, const RunConfig& cfg, double bulk)
{
    Fnv1a h;
    h.add(std::string_view("mode"));
    h.add(static_cast<std::int64_t>(optical_content_hash(g, pol)));
    h.add(cfg.target_wavelength());
    h.add(static_cast<std::int64_t>(cfg.solver.azimuthal_number.value_or(0)));
    h.add(static_cast<std::int64_t>(cfg.solver.m_scan));
    h.add(cfg.solver.eigen_tolerance);
    h.add(cfg.solver.confinement);
    h.add(bulk);
    return h.value();
}

template <class T, class Fn>
std::shared_ptr<const T> cached(FieldCache* cache, std::uint64_t key, Fn&& compute)
{
    if (cache) {
        std::shared_ptr<const T> hit;
        if constexpr (std::is_same_v<T, PotentialField>)
            hit = cache->potential(key);
        else
            hit = cache->mode(key);
        cache->count(static_cast<bool>(hit));
        if (hit)
            return hit;
    }
    auto value = std::make_shared<const T>(compute());
    return cache ? cache->put(key, std::move(value)) : value;
}

double core_index(const CrossSectionGeometry& geom, const MaterialLibrary& lib)
{
    double n = 1.0;
    for (const Region* r : geom.regions_with_role(RegionRole::core))
        n = std::max(n, lib.get(r->material).refractive_index());
    return n;
}

std::shared_ptr<const ModeSolution> solve_mode(const GridPtr& grid, const RunConfig& cfg, Polarization pol,
                                               double bulk, FieldCache* cache)
{
    return cached<ModeSolution>(cache, mode_key(*grid, pol, cfg, bulk), [&] {
        ModeOptions mo;
        mo.tolerance = cfg.solver.eigen_tolerance;
        mo.confinement = cfg.solver.confinement;
        mo.m_scan_half_width = cfg.solver.m_scan;
        if (cfg.solver.azimuthal_number) {
            const int m = *cfg.solver.azimuthal_number;
            ModeSolution mode = solve_fundamental_mode(grid, m, pol, mo);
            const ModeSolution next = solve_fundamental_mode(grid, m + 1, pol, mo);
            mode.fsr = next.omega - mode.omega;
            mode.tau = kTwoPi / *mode.fsr;
            return mode;
        }
        return find_mode_near_target(grid, pol, cfg.target_wavelength(), bulk, mo);
    });
}

std::string now_utc()
{
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

RunReport run_pipeline(const RunConfig& cfg, const RunOptions& options)
{
    RunReport rep;
    rep.config = cfg;
    rep.version = EOCONV_VERSION;
    if (cfg.output.timestamps)
        rep.timestamp = now_utc();

    const auto lib = stage("geometry", [&] { return cfg.library(); });
    const auto geom = stage("geometry", [&] {
        auto g = cfg.geometry.resolve();
        g.validate(lib);
        return g;
    });
    const Polarization pol = cfg.geometry.resolved_polarization();
    const double omega_b = to_angular(cfg.converter.microwave_frequency);

    double g0 = 0.0;
    if (cfg.converter.g0_override) {
        rep.g0_injected = true;
        g0 = to_angular(*cfg.converter.g0_override);
        rep.coupling.g0 = g0;
        rep.coupling.sign = 0.0;
        rep.coupling.inputs.omega_b = omega_b;
        rep.coupling.inputs.f_phi = geom.azimuthal_coverage;
        rep.warnings.push_back("g0 injected from configuration; field solves skipped");
    } else {
        const GridPtr grid = stage("geometry", [&] { return build_grid(geom, lib, cfg.solver.resolution); });
        rep.grid_hash = grid->hash_hex();
        rep.grid_n_rho = grid->n_rho();
        rep.grid_n_z = grid->n_z();
        rep.grid_spacing = grid->h_rho();

        ElectrostaticOptions eo;
        eo.tolerance = cfg.solver.tolerance;
        const auto potentials = geom.electrode_potentials();
        auto pf = stage("electrostatics", [&] {
            return cached<PotentialField>(options.cache, potential_key(*grid, potentials, eo),
                                          [&] { return solve_potential(grid, potentials, eo); });
        });
        PotentialSummary ps;
        ps.applied_voltage = pf->applied_voltage;
        ps.residual = pf->residual;
        ps.iterations = pf->iterations;
        ps.energy_per_unit_length = pf->energy_per_unit_length();
        stage("electrostatics", [&] {
            const PotentialField* cap_field = pf.get();
            std::shared_ptr<const PotentialField> unit;
            if (pf->applied_voltage == 0.0) {
                // Undriven: C from an auxiliary 1 V drive on the last electrode.
                auto drive = potentials;
                for (auto& [name, v] : drive)
                    v = 0.0;
                const auto electrodes = geom.regions_with_role(RegionRole::electrode);
                if (electrodes.size() < 2)
                    throw PreconditionError("capacitance needs at least two electrodes");
                drive[electrodes.back()->name] = 1.0;
                unit = cached<PotentialField>(options.cache, potential_key(*grid, drive, eo),
                                              [&] { return solve_potential(grid, drive, eo); });
                cap_field = unit.get();
                ps.unit_drive = true;
                rep.warnings.push_back("no coupling: electrodes carry no voltage difference");
            }
            ps.capacitance = capacitance(*cap_field, geom.microstrip_length, geom.energy_fraction);
            ps.capacitance_charge = capacitance_from_charge(*cap_field, geom.microstrip_length, geom.energy_fraction);
            ps.v_zpf = v_zpf(ps.capacitance, omega_b);
            return 0;
        });
        rep.potential = ps;
        rep.potential_field = pf;

        const double bulk = core_index(geom, lib);
        auto mode = stage("optics", [&] { return solve_mode(grid, cfg, pol, bulk, options.cache); });
        rep.mode_solution = mode;
        rep.mode = ModeSummary{mode->omega, mode->m, mode->n_eff, mode->fsr.value_or(0.0), mode->tau.value_or(0.0),
                               mode->residual, mode->boundary_ratio, pol};
        const double drift = std::abs(to_hz(mode->omega) / cfg.converter.optical_frequency - 1.0);
        if (drift > 0.02)
            rep.warnings.push_back("solved optical mode is " + format_significant(100.0 * drift, 2) +
                                   "% away from the converter optical frequency");

        rep.coupling = stage("coupling", [&] {
            auto c = g0_overlap(*mode, *pf, ps.capacitance, omega_b, geom.azimuthal_coverage, cfg.solver.n_phi);
            c.inputs.mode_id = "m=" + std::to_string(mode->m) + " " + std::string(polarization_name(pol));
            c.inputs.field_id = rep.grid_hash;
            return c;
        });
        g0 = rep.coupling.g0;
        if (!rep.coupling.dropped_terms.empty()) {
            std::string s = "semivectorial mode: Pockels rows not probed:";
            for (std::size_t i = 0; i < rep.coupling.dropped_terms.size(); ++i)
                s += (i ? ", " : " ") + rep.coupling.dropped_terms[i];
            rep.warnings.push_back(s);
        }

        // closed-form cross-checks (diagnostic)
        const auto cores = geom.regions_with_role(RegionRole::core);
        if (!cores.empty() && geom.electrode_gap > 0.0 && mode->tau) {
            const Material& core = lib.get(cores.front()->material);
            const int col = 2;
            const int row = pol == Polarization::TE ? 2 : 0;
            const double r = std::abs(core.r_contracted()(row, col)) * 1e-12;
            if (r > 0.0) {
                CouplingDiagnostics d;
                d.r_effective = r;
                const double eps_mw = core.eps_microwave_axial();
                const double n = core.refractive_index();
                const double omega_a = mode->omega;
                d.mode_volume = 2.0 * ps.capacitance * geom.electrode_gap * geom.electrode_gap / (kEps0 * eps_mw);
                d.closed_form = g0_closed_form(omega_a, n, r, omega_b, eps_mw, d.mode_volume);
                d.generic_form = g0_generic_form(omega_a, n, r, kTwoPi * geom.ring_radius, geom.electrode_gap,
                                                 *mode->tau, ps.capacitance, omega_b);
                rep.diagnostics = d;
            }
        }
    }

    stage("converter", [&] {
        rep.params = cfg.converter_params(g0);
        rep.conversion = evaluate_converter(rep.params);
        return 0;
    });
    for (const auto& w : rep.conversion.warnings)
        rep.warnings.push_back(w);
    return rep;
}

double table1_injected_g0(Preset preset)
{
    switch (preset) {
    case Preset::G1: return 0.15e3;
    case Preset::G2: return 0.75e3;
    case Preset::G3: return 12e3;
    case Preset::G4: return 50e3;
    }
    return 0.0;
}

RunConfig table1_config(Preset preset, bool inject_g0)
{
    RunConfig cfg = preset_config(preset);
    cfg.converter.optical_frequency = 200e12;
    cfg.converter.microwave_frequency = 6e9;
    cfg.converter.optical_q = 1e5;
    cfg.converter.microwave_q = 1e3;
    if (inject_g0)
        cfg.converter.g0_override = table1_injected_g0(preset);
    return cfg;
}

std::string format_significant(double value, int sig)
{
    if (value == 0.0)
        return "0";
    if (!std::isfinite(value))
        return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    char buf[64];
    const double mag = std::abs(value);
    if (mag >= 1e-3 && mag < 1e5) {
        const int digits = static_cast<int>(std::floor(std::log10(mag)));
        const int decimals = std::max(0, sig - 1 - digits);
        std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    } else {
        std::snprintf(buf, sizeof buf, "%.*e", std::max(0, sig - 1), value);
        // strip "+0" padding in the exponent: 8e-12, 2e+05 -> 2e5
        std::string s = buf;
        const auto e = s.find('e');
        std::string mant = s.substr(0, e);
        int ex = std::stoi(s.substr(e + 1));
        return mant + "e" + std::to_string(ex);
    }
    return buf;
}

std::vector<Table1Column> table1_columns(const std::vector<RunReport>& reports)
{
    std::vector<Table1Column> cols;
    for (const auto& r : reports) {
        Table1Column c;
        c.name = r.config.geometry.preset ? std::string(preset_name(*r.config.geometry.preset)) : r.config.source;
        c.g0_hz = to_hz(r.coupling.g0);
        c.C0 = r.conversion.C0;
        c.p_single = r.conversion.p_single;
        c.p_dual = r.conversion.p_dual;
        cols.push_back(c);
    }
    return cols;
}

std::string emit_table1(const std::vector<RunReport>& reports)
{
    if (reports.empty())
        throw PreconditionError("emit_table1: no reports");
    const auto cols = table1_columns(reports);
    std::ostringstream os;
    char buf[64];
    auto row = [&](const char* label, auto&& value) {
        std::snprintf(buf, sizeof buf, "%-22s", label);
        os << buf;
        for (const auto& c : cols) {
            std::snprintf(buf, sizeof buf, " %12s", value(c).c_str());
            os << buf;
        }
        os << '\n';
    };
    row("", [](const Table1Column& c) { return c.name; });
    row("g0/2pi (kHz)", [](const Table1Column& c) { return format_significant(c.g0_hz / 1e3, 2); });
    row("C0", [](const Table1Column& c) { return format_significant(c.C0, 1); });
    row("P single mode (W)", [](const Table1Column& c) { return c.C0 > 0 ? format_significant(c.p_single, 2) : "-"; });
    row("P dual mode (W)", [](const Table1Column& c) { return c.C0 > 0 ? format_significant(c.p_dual, 2) : "-"; });
    return os.str();
}

std::string emit_table1_csv(const std::vector<RunReport>& reports)
{
    if (reports.empty())
        throw PreconditionError("emit_table1: no reports");
    std::ostringstream os;
    os << "geometry,g0_over_2pi[Hz],C0[1],P_single[W],P_dual[W]\n";
    char buf[256];
    for (const auto& c : table1_columns(reports)) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g\n", c.name.c_str(), c.g0_hz, c.C0, c.p_single,
                      c.p_dual);
        os << buf;
    }
    return os.str();
}

double feasible_gap_lower_bound(const RunConfig& cfg, FieldCache* cache)
{
    const auto lib = cfg.library();
    const auto geom = cfg.geometry.resolve();
    const auto cores = geom.regions_with_role(RegionRole::core);
    if (cores.empty())
        throw PreconditionError("feasible_gap_lower_bound: geometry has no core");
    const Rect core = cores.front()->box;
    const GridPtr grid = build_grid(geom, lib, cfg.solver.resolution);
    const Polarization pol = cfg.geometry.resolved_polarization();
    const auto mode = solve_mode(grid, cfg, pol, core_index(geom, lib), cache);

    const StructuredGrid& g = *grid;
    double peak = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p)
        peak = std::max(peak, mode->eps[p] * mode->amplitude[p] * mode->amplitude[p]);
    const bool side = geom.layout == ElectrodeLayout::side;
    const double centre = side ? 0.5 * (core.rho_min + core.rho_max) : 0.5 * (core.z_min + core.z_max);
    double reach = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (mode->eps[p] * mode->amplitude[p] * mode->amplitude[p] < cfg.solver.confinement * peak)
            continue;
        const double x = side ? g.rho(g.i_of(p)) : g.z(g.j_of(p));
        reach = std::max(reach, std::abs(x - centre) + 0.5 * (side ? g.h_rho() : g.h_z()));
    }
    return 2.0 * reach;
}

} // namespace eoconv
