#include "eoconv/converter.hpp"

#include "eoconv/constants.hpp"
#include "eoconv/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace eoconv
{
namespace
{

void non_negative(double v, const char* name)
{
    if (!(v >= 0.0) || !std::isfinite(v))
        throw PreconditionError(std::string(name) + " must be finite and non-negative");
}

void positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw PreconditionError(std::string(name) + " must be positive");
}

CheckFlag grade(double ratio, const CoherenceThresholds& t)
{
    // thresholds hit exactly by design parameters (e.g. 6 GHz / 2 GHz) must not flip on rounding
    const double slack = 1.0 - 1e-12;
    if (ratio >= t.pass * slack)
        return CheckFlag::pass;
    return ratio >= t.warn * slack ? CheckFlag::warn : CheckFlag::fail;
}

} // namespace

std::string_view topology_name(PumpTopology t) noexcept
{
    return t == PumpTopology::single_mode ? "single_mode" : "dual_mode";
}

PumpTopology parse_topology(std::string_view name)
{
    if (name == "single_mode" || name == "single")
        return PumpTopology::single_mode;
    if (name == "dual_mode" || name == "dual")
        return PumpTopology::dual_mode;
    throw ConfigError("unknown pump topology '" + std::string(name) + "' (single_mode or dual_mode)");
}

void ConverterParams::validate() const
{
    positive(omega_a, "omega_a");
    positive(omega_b, "omega_b");
    non_negative(kappa_a_in, "kappa_a_in");
    non_negative(kappa_a_ex, "kappa_a_ex");
    non_negative(kappa_b_in, "kappa_b_in");
    non_negative(kappa_b_ex, "kappa_b_ex");
    positive(kappa_a(), "total optical decay rate");
    positive(kappa_b(), "total microwave decay rate");
    non_negative(g0, "g0");
    non_negative(thermal_occupation, "thermal occupation");
    if (pump_power.has_value() == photon_number.has_value())
        throw PreconditionError("converter: give exactly one of pump power and photon number");
    if (pump_power)
        non_negative(*pump_power, "pump power");
    if (photon_number)
        non_negative(*photon_number, "photon number");
}

double ConverterParams::pump_photons() const
{
    if (photon_number)
        return *photon_number;
    if (!pump_power)
        throw PreconditionError("converter: no pump specified");
    return eoconv::photon_number(*pump_power, *this, topology);
}

double ConverterParams::pump_watts() const
{
    if (pump_power)
        return *pump_power;
    if (!photon_number)
        throw PreconditionError("converter: no pump specified");
    const double penalty = topology == PumpTopology::single_mode ? single_mode_penalty(omega_b, kappa_a()) : 1.0;
    return *photon_number * kHbar * omega_a * kappa_a() * penalty;
}

double ConverterParams::cooperativity() const
{
    return pump_photons() * single_photon_cooperativity(g0, kappa_a(), kappa_b());
}

ConverterParams ConverterParams::from_quality_factors(double omega_a, double q_a, double ratio_a, double omega_b,
                                                      double q_b, double ratio_b, double g0)
{
    positive(q_a, "optical Q");
    positive(q_b, "microwave Q");
    if (!(ratio_a >= 0.0 && ratio_a <= 1.0) || !(ratio_b >= 0.0 && ratio_b <= 1.0))
        throw PreconditionError("coupling ratios kappa_ex/kappa must lie in [0, 1]");
    ConverterParams p;
    p.omega_a = omega_a;
    p.omega_b = omega_b;
    const double ka = omega_a / q_a;
    const double kb = omega_b / q_b;
    p.kappa_a_ex = ratio_a * ka;
    p.kappa_a_in = ka - p.kappa_a_ex;
    p.kappa_b_ex = ratio_b * kb;
    p.kappa_b_in = kb - p.kappa_b_ex;
    p.g0 = g0;
    return p;
}

double single_photon_cooperativity(double g0, double kappa_a, double kappa_b)
{
    positive(kappa_a, "kappa_a");
    positive(kappa_b, "kappa_b");
    return 4.0 * g0 * g0 / (kappa_a * kappa_b);
}

double efficiency(double omega, const ConverterParams& p) { return efficiency(omega, p, p.cooperativity()); }

double efficiency(double omega, const ConverterParams& p, double c)
{
    const double ka = p.kappa_a();
    const double kb = p.kappa_b();
    const double eta = (p.kappa_a_ex / ka) * (p.kappa_b_ex / kb);
    const double d = p.omega_b - omega;
    const double w = kb * (1.0 + c) / 2.0;
    return eta * 4.0 * c / ((1.0 + c) * (1.0 + c)) / (1.0 + d * d / (w * w));
}

double photon_number_dual(double pump_power, double omega_a, double kappa_a)
{
    non_negative(pump_power, "pump power");
    positive(omega_a, "omega_a");
    positive(kappa_a, "kappa_a");
    return pump_power / (kHbar * omega_a * kappa_a);
}

double single_mode_penalty(double omega_b, double kappa_a)
{
    positive(kappa_a, "kappa_a");
    return 1.0 + 4.0 * omega_b * omega_b / (kappa_a * kappa_a);
}

double photon_number(double pump_power, const ConverterParams& p, PumpTopology topology)
{
    const double n = photon_number_dual(pump_power, p.omega_a, p.kappa_a());
    return topology == PumpTopology::single_mode ? n / single_mode_penalty(p.omega_b, p.kappa_a()) : n;
}

double pump_power_for_cooperativity(double target, const ConverterParams& p, PumpTopology topology)
{
    non_negative(target, "target cooperativity");
    const double c0 = single_photon_cooperativity(p.g0, p.kappa_a(), p.kappa_b());
    if (!(c0 > 0.0))
        throw PreconditionError("pump power undefined: single-photon cooperativity is zero");
    const double dual = kHbar * p.omega_a * p.kappa_a() * target / c0;
    return topology == PumpTopology::single_mode ? dual * single_mode_penalty(p.omega_b, p.kappa_a()) : dual;
}

double added_noise(const ConverterParams& p) { return added_noise(p, p.cooperativity()); }

double added_noise(const ConverterParams& p, double c)
{
    if (!(c > 0.0))
        throw PreconditionError("added noise undefined for zero cooperativity");
    positive(p.kappa_a_ex, "kappa_a_ex");
    positive(p.kappa_b_ex, "kappa_b_ex");
    return (p.kappa_b() / p.kappa_b_ex) *
           (2.0 * p.thermal_occupation + (1.0 + c) * (1.0 + c) / (4.0 * c) * (p.kappa_a() / p.kappa_a_ex));
}

double ScatteringResult::output_power(int input) const { return s.col(input).squaredNorm(); }

ScatteringResult scattering_matrix(double omega, const ConverterParams& p, ScatteringModel model)
{
    return scattering_matrix(omega, p, p.cooperativity(), model);
}

ScatteringResult scattering_matrix(double omega, const ConverterParams& p, double c, ScatteringModel model)
{
    using cd = std::complex<double>;
    const double ka = p.kappa_a();
    const double kb = p.kappa_b();
    non_negative(c, "cooperativity");
    const double big_g = std::sqrt(c * ka * kb / 4.0);
    const double d = omega - p.omega_b;

    // M = K/2 + i H, H = [[delta_a, G], [G, -delta]]
    const double delta_a = model == ScatteringModel::full ? -d : 0.0;
    Eigen::Matrix2cd m;
    m << cd(ka / 2.0, delta_a), cd(0.0, big_g), cd(0.0, big_g), cd(kb / 2.0, -d);

    Eigen::Matrix<cd, 4, 2> l = Eigen::Matrix<cd, 4, 2>::Zero();
    l(0, 0) = std::sqrt(p.kappa_a_ex);
    l(1, 1) = std::sqrt(p.kappa_b_ex);
    l(2, 0) = std::sqrt(p.kappa_a_in);
    l(3, 1) = std::sqrt(p.kappa_b_in);

    ScatteringResult r;
    r.s = Eigen::Matrix4cd::Identity() - l * m.inverse() * l.transpose();
    return r;
}

std::string_view flag_name(CheckFlag f) noexcept
{
    switch (f) {
    case CheckFlag::pass: return "pass";
    case CheckFlag::warn: return "warn";
    case CheckFlag::fail: return "fail";
    }
    return "?";
}

std::vector<CoherenceCheck> coherence_check(const ConverterParams& p, const CoherenceThresholds& t)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto ratio = [&](double num, double den) { return den > 0.0 ? num / den : inf; };
    std::vector<CoherenceCheck> out;

    auto add = [&](std::string name, double r, std::string note = {}) {
        out.push_back({std::move(name), r, grade(r, t), std::move(note)});
    };
    add("resolved_sideband", ratio(p.omega_b, p.kappa_a()), "omega_b / kappa_a");
    add("linewidth_hierarchy", ratio(p.kappa_a(), p.kappa_b()), "kappa_a / kappa_b");
    const double geff = 2.0 * p.g0 * std::sqrt(p.pump_photons());
    add("weak_coupling", ratio(p.kappa_a_ex, geff),
        geff > 0.0 ? "kappa_a_ex / (2 g0 sqrt(n_p))" : "kappa_a_ex / (2 g0 sqrt(n_p)); zero coupling");
    add("optical_overcoupling", ratio(p.kappa_a_ex, p.kappa_a_in), "kappa_a_ex / kappa_a_in");
    add("microwave_overcoupling", ratio(p.kappa_b_ex, p.kappa_b_in), "kappa_b_ex / kappa_b_in");
    return out;
}

double measure_fwhm(const ConverterParams& p, double c)
{
    const double peak = efficiency(p.omega_b, p, c);
    if (!(peak > 0.0))
        return 0.0;
    auto f = [&](double d) { return efficiency(p.omega_b + d, p, c) - 0.5 * peak; };
    double lo = 0.0;
    double hi = p.kappa_b();
    while (f(hi) > 0.0)
        hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 2.0 * 0.5 * (lo + hi);
}

ConversionReport evaluate_converter(const ConverterParams& p, int curve_points, const CoherenceThresholds& t)
{
    p.validate();
    ConversionReport r;
    r.C0 = single_photon_cooperativity(p.g0, p.kappa_a(), p.kappa_b());
    r.photon_number = p.pump_photons();
    r.pump_power = p.pump_watts();
    r.C = r.photon_number * r.C0;
    r.gamma_peak = efficiency(p.omega_b, p, r.C);
    r.fwhm = p.kappa_b() * (1.0 + r.C);

    const int n = std::max(curve_points, 2);
    const double span = 3.0 * r.fwhm;
    r.curve_omega.resize(static_cast<std::size_t>(n));
    r.curve_gamma.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double w = p.omega_b - span + 2.0 * span * k / (n - 1);
        r.curve_omega[static_cast<std::size_t>(k)] = w;
        r.curve_gamma[static_cast<std::size_t>(k)] = efficiency(w, p, r.C);
    }

    if (r.C0 > 0.0) {
        r.p_single = pump_power_for_cooperativity(1.0, p, PumpTopology::single_mode);
        r.p_dual = pump_power_for_cooperativity(1.0, p, PumpTopology::dual_mode);
    } else {
        r.warnings.push_back("no coupling: g0 = 0, pump powers and added noise undefined");
    }
    if (r.C > 0.0 && p.kappa_a_ex > 0.0 && p.kappa_b_ex > 0.0)
        r.n_eq = added_noise(p, r.C);
    else if (r.C0 > 0.0)
        r.warnings.push_back("added noise undefined: zero cooperativity or no external coupling");

    r.coherence = coherence_check(p, t);
    for (const auto& c : r.coherence)
        if (c.flag != CheckFlag::pass)
            r.warnings.push_back("coherence " + c.name + " " + std::string(flag_name(c.flag)) + ": ratio " +
                                 std::to_string(c.ratio));
    return r;
}

} // namespace eoconv
