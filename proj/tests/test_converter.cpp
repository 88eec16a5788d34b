#include "support.hpp"

#include "eoconv/converter.hpp"
#include "eoconv/errors.hpp"

#include <gtest/gtest.h>

using namespace eotest;

namespace
{

const double wa = kTwoPi * 200e12;
const double wb = kTwoPi * 6e9;

ConverterParams table_params(double g0_hz, double photons = 1.0)
{
    auto p = ConverterParams::from_quality_factors(wa, 1e5, 1.0, wb, 1e3, 1.0, kTwoPi * g0_hz);
    p.photon_number = photons;
    return p;
}

// independent evaluation of the closed-form efficiency
double gamma_closed(double w, const ConverterParams& p, double C)
{
    const double pre = (p.kappa_a_ex / p.kappa_a()) * (p.kappa_b_ex / p.kappa_b());
    const double x = (p.omega_b - w) / (p.kappa_b() * (1 + C) / 2);
    return pre * 4 * C / ((1 + C) * (1 + C)) / (1 + x * x);
}

} // namespace

TEST(Cooperativity, TableColumns)
{
    const double ka = kTwoPi * 2e9, kb = kTwoPi * 6e6;
    EXPECT_NEAR(single_photon_cooperativity(kTwoPi * 50e3, ka, kb), 8.3333333333e-7, 1e-16);
    EXPECT_NEAR(single_photon_cooperativity(kTwoPi * 12e3, ka, kb), 4.8e-8, 1e-17);
    EXPECT_EQ(single_photon_cooperativity(0.0, ka, kb), 0.0);
    EXPECT_THROW(single_photon_cooperativity(1.0, 0.0, kb), PreconditionError);
}

TEST(Cooperativity, QualityFactors)
{
    const auto p = table_params(50e3);
    EXPECT_NEAR(to_hz(p.kappa_a()), 2e9, 1e-3);
    EXPECT_NEAR(to_hz(p.kappa_b()), 6e6, 1e-6);
    EXPECT_EQ(p.kappa_a_in, 0.0);
}

TEST(Efficiency, PerfectConversionAtUnitCooperativity)
{
    const auto p = table_params(50e3);
    EXPECT_DOUBLE_EQ(efficiency(wb, p, 1.0), 1.0);
    EXPECT_EQ(efficiency(wb, p, 0.0), 0.0);
    EXPECT_EQ(efficiency(wb + 1e7, p, 0.0), 0.0);
    EXPECT_NEAR(efficiency(wb, p, 3.0), 0.75, 1e-15);
}

TEST(Efficiency, ParamsCooperativityIsPhotonsTimesC0)
{
    const auto p = table_params(12e3, 2.5e6);
    EXPECT_DOUBLE_EQ(p.cooperativity(), 2.5e6 * single_photon_cooperativity(p.g0, p.kappa_a(), p.kappa_b()));
    EXPECT_DOUBLE_EQ(efficiency(wb, p), efficiency(wb, p, p.cooperativity()));
}

TEST(PhotonNumber, DualMode)
{
    const double ka = kTwoPi * 2e9;
    EXPECT_EQ(photon_number_dual(0.0, wa, ka), 0.0);
    EXPECT_NEAR(photon_number_dual(1.85e-3, wa, ka), 1110902.2325, 1e-3);
    EXPECT_NEAR(photon_number_dual(1.85e-3, wa, 2 * ka), 0.5 * photon_number_dual(1.85e-3, wa, ka), 1e-9);
    EXPECT_THROW(photon_number_dual(-1.0, wa, ka), PreconditionError);
}

TEST(PumpPower, TableColumns)
{
    EXPECT_NEAR(pump_power_for_cooperativity(1.0, table_params(50e3), PumpTopology::dual_mode), 1.998375676e-3,
                1e-11);
    EXPECT_NEAR(pump_power_for_cooperativity(1.0, table_params(50e3), PumpTopology::single_mode), 0.0739399000,
                1e-9);
    EXPECT_NEAR(pump_power_for_cooperativity(1.0, table_params(0.15e3), PumpTopology::dual_mode), 222.0417418,
                1e-6);
    EXPECT_THROW(pump_power_for_cooperativity(1.0, table_params(0.0), PumpTopology::dual_mode), PreconditionError);
}

TEST(PumpPower, SingleModePenalty)
{
    EXPECT_DOUBLE_EQ(single_mode_penalty(wb, kTwoPi * 2e9), 37.0);
    for (double g : {0.15e3, 0.75e3, 12e3, 50e3}) {
        const auto p = table_params(g);
        EXPECT_NEAR(pump_power_for_cooperativity(1.0, p, PumpTopology::single_mode) /
                        pump_power_for_cooperativity(1.0, p, PumpTopology::dual_mode),
                    37.0, 1e-12);
    }
}

TEST(PumpPower, RoundTripWithPhotonNumber)
{
    auto p = table_params(12e3);
    p.photon_number.reset();
    p.pump_power = 0.02;
    for (auto topo : {PumpTopology::single_mode, PumpTopology::dual_mode}) {
        p.topology = topo;
        const double n = photon_number(0.02, p, topo);
        EXPECT_NEAR(p.pump_photons(), n, 1e-9 * n);
        EXPECT_NEAR(pump_power_for_cooperativity(p.cooperativity(), p, topo), 0.02, 1e-12);
    }
}

TEST(Params, ExactlyOnePumpInput)
{
    auto p = table_params(12e3);
    p.pump_power = 1.0;
    EXPECT_THROW(p.validate(), PreconditionError);
    p.pump_power.reset();
    p.photon_number.reset();
    EXPECT_THROW(p.validate(), PreconditionError);
    p.photon_number = 3.0;
    p.kappa_a_ex = -1.0;
    EXPECT_THROW(p.validate(), PreconditionError);
}

TEST(Noise, Values)
{
    auto p = table_params(50e3);
    EXPECT_DOUBLE_EQ(added_noise(p, 1.0), 1.0);
    p.thermal_occupation = 2.0;
    EXPECT_DOUBLE_EQ(added_noise(p, 1.0), 5.0);
    EXPECT_THROW(added_noise(p, 0.0), PreconditionError);
    double best = 1e300, argbest = 0;
    for (int i = 1; i <= 4000; ++i) {
        const double C = i * 1e-3;
        if (added_noise(p, C) < best) {
            best = added_noise(p, C);
            argbest = C;
        }
    }
    EXPECT_NEAR(argbest, 1.0, 1e-3);
}

TEST(Scattering, DecoupledIsPureReflection)
{
    auto p = table_params(0.0);
    p.kappa_b_in = 0.3 * p.kappa_b_ex;
    for (double d : {-2e7, 0.0, 5e6}) {
        const auto s = scattering_matrix(wb + d, p, 0.0);
        EXPECT_EQ(std::abs(s.optical_from_microwave()), 0.0);
        EXPECT_EQ(std::abs(s.microwave_from_optical()), 0.0);
        const std::complex<double> hk(p.kappa_b() / 2, d);
        const double want = std::abs(std::complex<double>(p.kappa_b_ex, 0.0) - hk) / std::abs(hk);
        EXPECT_NEAR(std::abs(s.microwave_reflection()), want, 1e-12);
    }
}

TEST(Scattering, PerfectConversionPoint)
{
    const auto s = scattering_matrix(wb, table_params(50e3), 1.0);
    EXPECT_NEAR(std::norm(s.optical_from_microwave()), 1.0, 1e-14);
}

TEST(Scattering, MatchesClosedFormOnRandomParams)
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        auto p = table_params(1e3);
        p.kappa_a_in = p.kappa_a_ex * 2 * u(gen);
        p.kappa_b_in = p.kappa_b_ex * 2 * u(gen);
        const double C = 5 * u(gen);
        const double w = wb + (u(gen) - 0.5) * 6 * p.kappa_b() * (1 + C);
        worst = std::max(worst, std::abs(std::norm(scattering_matrix(w, p, C).optical_from_microwave()) -
                                         efficiency(w, p, C)));
    }
    EXPECT_LE(worst, 1e-10);
}

TEST(Coherence, TableParameters)
{
    auto p = table_params(50e3);
    const auto checks = coherence_check(p);
    auto find = [&](const std::string& n) {
        for (const auto& c : checks)
            if (c.name == n)
                return c;
        ADD_FAILURE() << n;
        return CoherenceCheck{};
    };
    EXPECT_NEAR(find("resolved_sideband").ratio, 3.0, 1e-12);
    EXPECT_EQ(find("resolved_sideband").flag, CheckFlag::warn);
    EXPECT_NEAR(find("linewidth_hierarchy").ratio, 2e9 / 6e6, 1e-6);

    p.kappa_b_in = p.kappa_b_ex / 100;
    EXPECT_EQ(find("microwave_overcoupling").flag, CheckFlag::pass);
    for (const auto& c : coherence_check(p))
        if (c.name == "microwave_overcoupling") {
            EXPECT_NEAR(c.ratio, 100.0, 1e-9);
            EXPECT_EQ(c.flag, CheckFlag::pass);
        }

    const auto zero = coherence_check(table_params(0.0));
    for (const auto& c : zero)
        if (c.name == "weak_coupling") {
            EXPECT_TRUE(std::isinf(c.ratio));
            EXPECT_EQ(c.flag, CheckFlag::pass);
            EXPECT_NE(c.note.find("zero coupling"), std::string::npos);
        }
}

TEST(Report, FwhmAndCurve)
{
    auto p = table_params(50e3, 2.0 / 8.3333333333333e-7);
    const auto r = evaluate_converter(p);
    EXPECT_NEAR(r.C, 2.0, 1e-9);
    EXPECT_NEAR(r.fwhm, p.kappa_b() * 3.0, 1e-6 * r.fwhm);
    EXPECT_LT(rel(measure_fwhm(p, r.C), p.kappa_b() * 3.0), 0.005);
    EXPECT_DOUBLE_EQ(r.gamma_peak, efficiency(wb, p, r.C));
    for (double g : r.curve_gamma) {
        EXPECT_GE(g, 0.0);
        EXPECT_LE(g, 1.0);
    }
    ASSERT_TRUE(r.n_eq.has_value());
    EXPECT_NEAR(r.p_single / r.p_dual, 37.0, 1e-9);
}

TEST(Report, ZeroCouplingFlagged)
{
    auto p = table_params(0.0);
    p.photon_number = 0.0;
    const auto r = evaluate_converter(p);
    EXPECT_EQ(r.C0, 0.0);
    EXPECT_EQ(r.gamma_peak, 0.0);
    EXPECT_FALSE(r.n_eq.has_value());
    bool flagged = false;
    for (const auto& w : r.warnings)
        flagged |= w.find("no coupling") != std::string::npos;
    EXPECT_TRUE(flagged);
}
