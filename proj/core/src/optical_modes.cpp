#include "eoconv/optical_modes.hpp"

#include "eoconv/constants.hpp"
#include "eoconv/eigensolver.hpp"
#include "eoconv/errors.hpp"
#include "eoconv/hash.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <map>

namespace eoconv
{
namespace
{

// The operator is assembled in micrometres to keep entries near unity.
constexpr double kUm = 1e6;

struct Operator
{
    SparseMatrix a;
    Eigen::VectorXd b;
    double eps_max = 0.0;
    double rho_max_um = 0.0;
};

// rho-weighted finite volumes for
//   -(1/rho) d/drho(rho dpsi/drho) - d2psi/dz2 + (m^2/rho^2) psi = k^2 eps psi
// with psi = 0 on the outer walls.
Operator assemble(const StructuredGrid& g, const std::vector<double>& eps, int m)
{
    const int nr = g.n_rho();
    const int nz = g.n_z();
    const double hr = g.h_rho() * kUm;
    const double hz = g.h_z() * kUm;
    const double m2 = static_cast<double>(m) * m;

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(g.size() * 5);
    Operator op;
    op.b.resize(static_cast<Eigen::Index>(g.size()));
    std::vector<double> diag(g.size(), 0.0);

    auto link = [&](std::size_t p, std::size_t q, double w) {
        diag[p] += w;
        diag[q] += w;
        trip.emplace_back(static_cast<int>(p), static_cast<int>(q), -w);
        trip.emplace_back(static_cast<int>(q), static_cast<int>(p), -w);
    };

    const bool axis = g.rho_min() <= 0.0;
    for (int j = 0; j < nz; ++j) {
        for (int i = 0; i < nr; ++i) {
            const std::size_t p = g.index(i, j);
            const double rc = g.rho(i) * kUm;
            const double rl = g.rho_face(i) * kUm;
            const double rr = g.rho_face(i + 1) * kUm;
            if (i + 1 < nr)
                link(p, g.index(i + 1, j), rr * hz / hr);
            else
                diag[p] += rr * hz / (0.5 * hr);
            if (i == 0 && !axis)
                diag[p] += rl * hz / (0.5 * hr);
            if (j + 1 < nz)
                link(p, g.index(i, j + 1), rc * hr / hz);
            else
                diag[p] += rc * hr / (0.5 * hz);
            if (j == 0)
                diag[p] += rc * hr / (0.5 * hz);
            diag[p] += m2 * hr * hz / rc;
            op.b(static_cast<Eigen::Index>(p)) = eps[p] * rc * hr * hz;
            op.eps_max = std::max(op.eps_max, eps[p]);
        }
    }
    for (std::size_t p = 0; p < g.size(); ++p)
        trip.emplace_back(static_cast<int>(p), static_cast<int>(p), diag[p]);
    op.a.resize(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.size()));
    op.a.setFromTriplets(trip.begin(), trip.end());
    op.rho_max_um = g.rho_max() * kUm;
    return op;
}

void check_inputs(const GridPtr& grid, const std::vector<double>& eps, int m)
{
    if (!grid)
        throw PreconditionError("mode solver: null grid");
    if (m < 1)
        throw PreconditionError("mode solver: azimuthal number must be >= 1, got " + std::to_string(m));
    if (eps.size() != grid->size())
        throw PreconditionError("mode solver: permittivity map does not match the grid");
    for (double e : eps)
        if (!(e > 0.0) || !std::isfinite(e))
            throw PreconditionError("mode solver: permittivity must be positive and finite");
}

void check_wavelength(double lambda)
{
    if (!(lambda >= 0.4e-6 && lambda <= 5e-6))
        throw PreconditionError("target wavelength " + std::to_string(lambda * 1e6) +
                                " um outside the validated 0.4-5 um range");
}

ModeSolution make_mode(const GridPtr& grid, const std::vector<double>& eps, int m, Polarization pol,
                       const EigenPair& pair)
{
    const StructuredGrid& g = *grid;
    ModeSolution mode;
    mode.grid = grid;
    mode.polarization = pol;
    mode.m = m;
    mode.eigenvalue = pair.value * kUm * kUm;
    mode.omega = kSpeedOfLight * std::sqrt(pair.value) * kUm;
    mode.eps = eps;
    mode.residual = pair.residual;

    // B-normalised in um units: sum eps rho h h x^2 = 1 (um^3). Rescale so that
    // eps0 * 2 pi * sum eps rho h h E^2 (SI) = 1 J.
    double s = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p)
        s += eps[p] * g.volume_per_radian(p) * pair.vector(static_cast<Eigen::Index>(p)) *
             pair.vector(static_cast<Eigen::Index>(p));
    const double scale = 1.0 / std::sqrt(kEps0 * kTwoPi * s);
    mode.amplitude.resize(g.size());
    for (std::size_t p = 0; p < g.size(); ++p)
        mode.amplitude[p] = scale * pair.vector(static_cast<Eigen::Index>(p));
    mode.normalization = scale;
    mode.energy = mode_energy(mode);
    mode.n_eff = m * kSpeedOfLight / (mode.omega * g.reference_radius());
    mode.boundary_ratio = boundary_energy_ratio(g, eps, mode.amplitude);
    return mode;
}

} // namespace

double ModeSolution::wavelength() const { return kTwoPi * kSpeedOfLight / omega; }

Vector3 ModeSolution::field(std::size_t cell) const
{
    const double a = amplitude[cell];
    return polarization == Polarization::TE ? Vector3(0.0, 0.0, a) : Vector3(a, 0.0, 0.0);
}

Vector3 ModeSolution::displacement(std::size_t cell) const { return eps[cell] * field(cell); }

ModeSolution ModeSolution::scaled(double factor) const
{
    ModeSolution out = *this;
    for (double& v : out.amplitude)
        v *= factor;
    out.normalization *= factor;
    out.energy = energy * factor * factor;
    return out;
}

std::vector<double> optical_permittivity(const StructuredGrid& g, Polarization pol)
{
    std::vector<double> eps(g.size());
    for (std::size_t p = 0; p < g.size(); ++p)
        eps[p] = pol == Polarization::TE ? g.material(p).eps_optical_axial() : g.material(p).eps_optical_radial();
    return eps;
}

double mode_energy(const ModeSolution& mode)
{
    if (!mode.grid)
        return 0.0;
    const StructuredGrid& g = *mode.grid;
    double s = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p)
        s += mode.eps[p] * mode.amplitude[p] * mode.amplitude[p] * g.volume_per_radian(p);
    return kEps0 * kTwoPi * s;
}

double boundary_energy_ratio(const StructuredGrid& g, const std::vector<double>& eps,
                             const std::vector<double>& amp)
{
    double peak = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p)
        peak = std::max(peak, eps[p] * amp[p] * amp[p]);
    if (peak == 0.0)
        return 0.0;
    double edge = 0.0;
    auto visit = [&](int i, int j) {
        const std::size_t p = g.index(i, j);
        edge = std::max(edge, eps[p] * amp[p] * amp[p]);
    };
    for (int i = 0; i < g.n_rho(); ++i) {
        visit(i, 0);
        visit(i, g.n_z() - 1);
    }
    for (int j = 0; j < g.n_z(); ++j) {
        visit(g.n_rho() - 1, j);
        if (g.rho_min() > 0.0)
            visit(0, j);
    }
    return edge / peak;
}

std::vector<ModeSolution> solve_wgm_modes(GridPtr grid, int m, Polarization pol, double target_wavelength,
                                          const ModeOptions& options)
{
    if (!grid)
        throw PreconditionError("mode solver: null grid");
    return solve_wgm_modes(grid, optical_permittivity(*grid, pol), m, pol, target_wavelength, options);
}

std::vector<ModeSolution> solve_wgm_modes(GridPtr grid, const std::vector<double>& eps, int m, Polarization pol,
                                          double target_wavelength, const ModeOptions& options)
{
    check_inputs(grid, eps, m);
    check_wavelength(target_wavelength);
    if (options.n_modes < 1)
        throw PreconditionError("mode solver: n_modes must be >= 1");

    const Operator op = assemble(*grid, eps, m);
    const double k_target = kTwoPi / (target_wavelength * kUm);
    EigenOptions eo;
    eo.n_eigen = options.n_modes + 4;
    eo.tolerance = options.tolerance;
    const auto pairs = solve_generalized_nearest(op.a, op.b, k_target * k_target, eo);

    const double omega_t = kTwoPi * kSpeedOfLight / target_wavelength;
    std::vector<ModeSolution> modes;
    double best_ratio = 1.0;
    for (const auto& pair : pairs) {
        if (!(pair.value > 0.0))
            continue;
        ModeSolution mode = make_mode(grid, eps, m, pol, pair);
        best_ratio = std::min(best_ratio, mode.boundary_ratio);
        if (mode.boundary_ratio <= options.confinement)
            modes.push_back(std::move(mode));
    }
    if (modes.empty())
        throw NoConfinedModeError("no confined mode near the target: best boundary/peak energy ratio " +
                                      std::to_string(best_ratio) + " exceeds " + std::to_string(options.confinement),
                                  0.0);
    std::stable_sort(modes.begin(), modes.end(), [&](const ModeSolution& x, const ModeSolution& y) {
        return std::abs(x.omega - omega_t) < std::abs(y.omega - omega_t);
    });
    if (static_cast<int>(modes.size()) > options.n_modes)
        modes.resize(static_cast<std::size_t>(options.n_modes));
    return modes;
}

ModeSolution solve_fundamental_mode(GridPtr grid, int m, Polarization pol, const ModeOptions& options)
{
    if (!grid)
        throw PreconditionError("mode solver: null grid");
    return solve_fundamental_mode(grid, optical_permittivity(*grid, pol), m, pol, options);
}

ModeSolution solve_fundamental_mode(GridPtr grid, const std::vector<double>& eps, int m, Polarization pol,
                                    const ModeOptions& options)
{
    check_inputs(grid, eps, m);
    const Operator op = assemble(*grid, eps, m);
    // Rayleigh-quotient lower bound of the spectrum: the whole spectrum lies
    // above it, so the nearest eigenvalue is the lowest one.
    const double lower = static_cast<double>(m) * m / (op.rho_max_um * op.rho_max_um * op.eps_max);
    EigenOptions eo;
    eo.n_eigen = 1;
    eo.tolerance = options.tolerance;
    const auto pairs = solve_generalized_nearest(op.a, op.b, 0.999 * lower, eo);
    ModeSolution mode = make_mode(grid, eps, m, pol, pairs.front());
    if (mode.boundary_ratio > options.confinement)
        throw NoConfinedModeError("fundamental mode m=" + std::to_string(m) +
                                      " is not confined: boundary/peak energy ratio " +
                                      std::to_string(mode.boundary_ratio),
                                  mode.residual);
    return mode;
}

FsrResult fsr_and_tau(GridPtr grid, int m, Polarization pol, const ModeOptions& options)
{
    const ModeSolution a = solve_fundamental_mode(grid, m, pol, options);
    const ModeSolution b = solve_fundamental_mode(grid, m + 1, pol, options);
    FsrResult r;
    r.omega_m = a.omega;
    r.omega_m1 = b.omega;
    r.fsr = b.omega - a.omega;
    if (!(r.fsr > 0.0))
        throw SolverError("non-positive free spectral range between m=" + std::to_string(m) + " and m+1", 0.0);
    r.tau = kTwoPi / r.fsr;
    return r;
}

ModeSolution find_mode_near_target(GridPtr grid, Polarization pol, double target_wavelength, double bulk_index,
                                   const ModeOptions& options)
{
    if (!grid)
        throw PreconditionError("mode solver: null grid");
    check_wavelength(target_wavelength);
    if (!(bulk_index >= 1.0))
        throw PreconditionError("bulk refractive index must be >= 1");

    const double omega_t = kTwoPi * kSpeedOfLight / target_wavelength;
    const int m0 = std::max(1, static_cast<int>(std::lround(kTwoPi * grid->reference_radius() * bulk_index /
                                                            target_wavelength)));
    const auto eps = optical_permittivity(*grid, pol);

    std::map<int, ModeSolution> solved;
    auto get = [&](int m) -> const ModeSolution& {
        auto it = solved.find(m);
        if (it == solved.end())
            it = solved.emplace(m, solve_fundamental_mode(grid, eps, m, pol, options)).first;
        return it->second;
    };

    // Scan the window m0 +- w using the local FSR to predict the best m. The
    // bulk index overestimates n_eff, so when the prediction leaves the window
    // it is recentred on the prediction (at most a few times).
    const int w = std::max(1, options.m_scan_half_width);
    int centre = m0;
    int best = -1;
    for (int round = 0; round < 4; ++round) {
        const int lo = std::max(1, centre - w);
        const int hi = centre + w;
        const int base = std::clamp(centre, lo, hi - 1);
        const double w0 = get(base).omega;
        const double slope = get(base + 1).omega - w0;
        int guess = base;
        if (slope > 0.0)
            guess = base + static_cast<int>(std::lround((omega_t - w0) / slope));
        guess = std::max(1, guess);
        if (guess < lo || guess > hi) {
            centre = guess;
            continue;
        }
        best = -1;
        for (int m = std::max(lo, guess - 1); m <= std::min(hi, guess + 1); ++m)
            if (best < 0 || std::abs(get(m).omega - omega_t) < std::abs(get(best).omega - omega_t))
                best = m;
        break;
    }
    if (best < 0)
        throw NoConfinedModeError("m-scan did not settle near the target wavelength", 0.0);

    ModeSolution mode = get(best);
    const ModeSolution& next = get(best + 1);
    mode.fsr = next.omega - mode.omega;
    mode.tau = kTwoPi / *mode.fsr;
    return mode;
}

MatchFsrResult match_fsr(const CrossSectionGeometry& geometry, const MaterialLibrary& materials,
                         double cells_per_metre, Polarization pol, double omega_b, double target_wavelength,
                         const MatchFsrOptions& options, const ModeOptions& mode_options)
{
    if (!(omega_b > 0.0))
        throw PreconditionError("match_fsr: microwave frequency must be positive");
    if (!(options.radius_min > 0.0 && options.radius_max > options.radius_min))
        throw PreconditionError("match_fsr: invalid radius range");
    check_wavelength(target_wavelength);

    double bulk = 1.0;
    for (const Region* r : geometry.regions_with_role(RegionRole::core))
        bulk = std::max(bulk, materials.get(r->material).refractive_index());

    MatchFsrResult result;
    std::map<double, std::pair<double, int>> memo;
    auto fsr_at = [&](double radius) -> std::pair<double, int> {
        auto it = memo.find(radius);
        if (it != memo.end())
            return it->second;
        const GridPtr grid = build_grid(geometry.with_ring_radius(radius), materials, cells_per_metre);
        const int m = std::max(1, static_cast<int>(std::lround(kTwoPi * radius * bulk / target_wavelength)));
        const FsrResult f = fsr_and_tau(grid, m, pol, mode_options);
        ++result.evaluations;
        return memo[radius] = {f.fsr, m};
    };
    auto f = [&](double log_r) { return std::log(fsr_at(std::exp(log_r)).first / omega_b); };

    const double a = std::log(options.radius_min);
    const double b = std::log(options.radius_max);
    const double fa = f(a);
    const double fb = f(b);
    auto finish = [&](double radius) {
        const auto [fsr, m] = fsr_at(radius);
        result.radius = radius;
        result.fsr = fsr;
        result.m = m;
        result.geometry = geometry.with_ring_radius(radius);
        return result;
    };
    if (std::abs(fa) <= options.relative_tolerance)
        return finish(options.radius_min);
    if (std::abs(fb) <= options.relative_tolerance)
        return finish(options.radius_max);
    if (fa * fb > 0.0)
        throw SolverError("match_fsr: no radius in [" + std::to_string(options.radius_min) + ", " +
                              std::to_string(options.radius_max) + "] m gives FSR = omega_b (FSR range " +
                              std::to_string(to_hz(std::exp(fa) * omega_b)) + " .. " +
                              std::to_string(to_hz(std::exp(fb) * omega_b)) + " Hz)",
                          std::min(std::abs(fa), std::abs(fb)));

    // Start from the 1/R estimate around the geometry's own radius when it is inside the range.
    double lo = a, hi = b, flo = fa, fhi = fb;
    const double r0 = geometry.ring_radius;
    if (r0 > options.radius_min && r0 < options.radius_max) {
        const double f0 = f(std::log(r0));
        if (std::abs(f0) <= options.relative_tolerance)
            return finish(r0);
        const double guess = std::clamp(std::log(r0) + f0, a, b);
        const double fg = f(guess);
        if (std::abs(fg) <= options.relative_tolerance)
            return finish(std::exp(guess));
        for (auto [x, fx] : {std::pair{std::log(r0), f0}, std::pair{guess, fg}}) {
            if (fx * flo > 0.0 && x > lo && x < hi) {
                lo = x;
                flo = fx;
            } else if (fx * fhi > 0.0 && x > lo && x < hi) {
                hi = x;
                fhi = fx;
            }
        }
    }

    std::uintmax_t iters = static_cast<std::uintmax_t>(options.max_iterations);
    const double tol = options.relative_tolerance;
    auto stop = [&](double x, double y) {
        return std::abs(y - x) < 1e-4 || std::abs(f(0.5 * (x + y))) <= 0.25 * tol;
    };
    const auto bracket = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
    // pick the better end of the final bracket (or its midpoint)
    double best = bracket.first;
    for (double x : {bracket.second, 0.5 * (bracket.first + bracket.second)})
        if (std::abs(f(x)) < std::abs(f(best)))
            best = x;
    if (std::abs(f(best)) > tol)
        throw SolverError("match_fsr: root solve stalled; FSR mismatch " + std::to_string(std::abs(f(best))), f(best));
    return finish(std::exp(best));
}

std::uint64_t optical_content_hash(const StructuredGrid& g, Polarization pol)
{
    Fnv1a h;
    h.add(std::string_view("optical"));
    h.add(static_cast<std::int64_t>(pol == Polarization::TE ? 0 : 1));
    h.add(static_cast<std::int64_t>(g.n_rho()));
    h.add(static_cast<std::int64_t>(g.n_z()));
    h.add(g.h_rho());
    h.add(g.h_z());
    h.add(g.rho_min());
    h.add(g.z_min());
    h.add(g.reference_radius());
    for (double e : optical_permittivity(g, pol))
        h.add(e);
    return h.value();
}

} // namespace eoconv
