#ifndef EOCONV_CONVERTER_HPP
#define EOCONV_CONVERTER_HPP

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eoconv
{

enum class PumpTopology
{
    single_mode, // pump detuned by omega_b from the optical resonance
    dual_mode,   // pump on a neighbouring optical mode one FSR away
};

std::string_view topology_name(PumpTopology t) noexcept;
PumpTopology parse_topology(std::string_view name);

// Lumped converter. All rates in rad/s. Exactly one of pump_power /
// photon_number is the primary input; the other follows from it.
struct ConverterParams
{
    double omega_a = 0.0;
    double omega_b = 0.0;
    double kappa_a_in = 0.0;
    double kappa_a_ex = 0.0;
    double kappa_b_in = 0.0;
    double kappa_b_ex = 0.0;
    double g0 = 0.0;
    PumpTopology topology = PumpTopology::dual_mode;
    std::optional<double> pump_power;    // W
    std::optional<double> photon_number; // intracavity pump photons
    double thermal_occupation = 0.0;

    double kappa_a() const noexcept { return kappa_a_in + kappa_a_ex; }
    double kappa_b() const noexcept { return kappa_b_in + kappa_b_ex; }

    // Throws PreconditionError on negative rates, zero totals or an
    // ambiguous pump specification.
    void validate() const;
    double pump_photons() const;
    double pump_watts() const;
    double cooperativity() const;

    // Rates from loaded Q and the external fraction kappa_ex / kappa.
    static ConverterParams from_quality_factors(double omega_a, double q_a, double ratio_a, double omega_b,
                                                double q_b, double ratio_b, double g0);
};

// 4 g0^2 / (kappa_a kappa_b).
double single_photon_cooperativity(double g0, double kappa_a, double kappa_b);

// Conversion efficiency at signal frequency omega (rad/s) for the params'
// cooperativity, or for an explicit one.
double efficiency(double omega, const ConverterParams& params);
double efficiency(double omega, const ConverterParams& params, double cooperativity);

// P / (hbar omega_a kappa_a).
double photon_number_dual(double pump_power, double omega_a, double kappa_a);

// 1 + 4 omega_b^2 / kappa_a^2: extra pump needed when the pump sits omega_b
// off the optical resonance (single-mode scheme).
double single_mode_penalty(double omega_b, double kappa_a);

// Photons per watt for the chosen topology.
double photon_number(double pump_power, const ConverterParams& params, PumpTopology topology);

double pump_power_for_cooperativity(double target, const ConverterParams& params, PumpTopology topology);

// On-resonance added noise quanta; throws for C <= 0.
double added_noise(const ConverterParams& params);
double added_noise(const ConverterParams& params, double cooperativity);

enum class ScatteringModel
{
    adiabatic, // optical response flat across the microwave linewidth
    full,      // both modes detuned by the signal offset
};

// Port order: optical external, microwave external, optical loss, microwave loss.
struct ScatteringResult
{
    Eigen::Matrix4cd s;
    std::complex<double> optical_from_microwave() const { return s(0, 1); }
    std::complex<double> microwave_from_optical() const { return s(1, 0); }
    std::complex<double> optical_reflection() const { return s(0, 0); }
    std::complex<double> microwave_reflection() const { return s(1, 1); }
    // Sum of |S_ij|^2 over outputs i for input j (1 for a lossless account).
    double output_power(int input) const;
};

ScatteringResult scattering_matrix(double omega, const ConverterParams& params,
                                   ScatteringModel model = ScatteringModel::adiabatic);
ScatteringResult scattering_matrix(double omega, const ConverterParams& params, double cooperativity,
                                   ScatteringModel model = ScatteringModel::adiabatic);

enum class CheckFlag
{
    pass,
    warn,
    fail,
};

std::string_view flag_name(CheckFlag f) noexcept;

struct CoherenceThresholds
{
    double pass = 10.0; // "much greater than"
    double warn = 3.0;
};

struct CoherenceCheck
{
    std::string name;
    double ratio = 0.0;
    CheckFlag flag = CheckFlag::pass;
    std::string note;
};

std::vector<CoherenceCheck> coherence_check(const ConverterParams& params, const CoherenceThresholds& t = {});

// Full width at half maximum of gamma(omega) located by bisection on the
// efficiency curve (rad/s).
double measure_fwhm(const ConverterParams& params, double cooperativity);

struct ConversionReport
{
    double C0 = 0.0;
    double C = 0.0;
    double photon_number = 0.0;
    double pump_power = 0.0; // W
    double gamma_peak = 0.0;
    std::vector<double> curve_omega; // rad/s
    std::vector<double> curve_gamma;
    double fwhm = 0.0;       // rad/s, kappa_b (1 + C)
    double p_single = 0.0;   // W for C = 1
    double p_dual = 0.0;
    std::optional<double> n_eq;
    std::vector<CoherenceCheck> coherence;
    std::vector<std::string> warnings;
};

ConversionReport evaluate_converter(const ConverterParams& params, int curve_points = 201,
                                    const CoherenceThresholds& thresholds = {});

} // namespace eoconv

#endif // EOCONV_CONVERTER_HPP
