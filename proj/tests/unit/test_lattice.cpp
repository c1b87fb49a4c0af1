#include "doctest.h"

#include "symcool/config.hpp"
#include "symcool/lattice.hpp"

#include <cmath>
#include <numbers>

using namespace symcool;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double hbar = 1.054571817e-34;
constexpr double m_Rb = 86.909 * 1.66054e-27;

ExperimentConfig baseline()
{
    return load_config(std::string(SYMCOOL_CONFIG_DIR) + "/paper-baseline.cfg");
}

LatticeParams reported_lattice()
{
    LatticeParams p;
    p.P0 = 16.5e-3;
    p.w0 = 284e-6;
    p.Delta_LA = -2 * pi * 8e9;
    p.k_L = 2 * pi / 780e-9;
    return p;
}

CouplingBudget reported_budget()
{
    return {0.7, 0.8};
}

}

TEST_SUITE("lattice") {

TEST_CASE("single-beam depth")
{
    auto p = reported_lattice();
    double Gamma = 2 * pi * 6.1e6;
    double I0 = 2 * p.P0 / (pi * p.w0 * p.w0);
    double oracle = hbar * Gamma * Gamma / (12 * p.Delta_LA) * I0 / 17.0;
    double V0 = lattice::dipole_potential_depth(p.P0, p.w0, p.Delta_LA);
    CHECK(V0 == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(V0 / hbar / (2 * pi) == doctest::Approx(-2.969388e6).epsilon(1e-6));
    CHECK(V0 / hbar / (2 * pi) == doctest::Approx(-3.0e6).epsilon(0.02));
    CHECK(lattice::dipole_potential_depth(0, p.w0, p.Delta_LA) == 0.0);
    CHECK(lattice::dipole_potential_depth(p.P0, p.w0, -p.Delta_LA) == doctest::Approx(-V0));
    CHECK_THROWS_AS(lattice::dipole_potential_depth(p.P0, p.w0, 0), ValidationError);

    Warnings w;
    lattice::dipole_potential_depth(p.P0, p.w0, 2 * pi * 0.5e9, PhysicalConstants::standard(), &w);
    CHECK(w.messages.size() == 1);
}

TEST_CASE("field components")
{
    auto p = reported_lattice();
    auto f = lattice::compute_field(p, reported_budget());
    double eta = std::sqrt(0.7);
    CHECK(f.V_d == doctest::Approx(f.V0 * (1 + eta * 0.8) * (1 + eta * 0.8)));
    CHECK(f.V_m == doctest::Approx(4 * eta * 0.8 * f.V0));
    CHECK(f.V_m < 0);
    CHECK(f.Pr_over_P0 == doctest::Approx(0.448));
    CHECK(lattice::reflected_power_ratio({1, 1}) == 1.0);
    CHECK(lattice::kMeasuredReflectedPowerRatio == 0.51);
}

TEST_CASE("centre trap frequency")
{
    auto p = reported_lattice();
    auto f = lattice::compute_field(p, reported_budget());
    CHECK(f.Omega_a0 / (2 * pi) == doctest::Approx(346.397e3).epsilon(1e-6));
    CHECK(f.Omega_a0 / (2 * pi) == doctest::Approx(348e3).epsilon(0.02));
    CHECK(lattice::trap_frequency(0, f, p) == doctest::Approx(f.Omega_a0));
    CHECK(lattice::trap_frequency(p.w0 * std::sqrt(std::log(2.0)), f, p) == doctest::Approx(f.Omega_a0 / 2));

    auto p4 = p;
    p4.P0 *= 4;
    CHECK(lattice::compute_field(p4, reported_budget()).Omega_a0 == doctest::Approx(2 * f.Omega_a0));
}

TEST_CASE("harmonic approximation: curvature at the well bottom is m Omega_a^2")
{
    auto p = reported_lattice();
    auto f = lattice::compute_field(p, reported_budget());
    for (double phi: {0.0, 0.3, 1.7}) {
        p.phi = phi;
        double xb = lattice::well_bottom(f, p);
        for (double r: {0.0, 100e-6, 284e-6, 500e-6}) {
            double w = lattice::trap_frequency(r, f, p);
            CHECK(lattice::potential_curvature(r, xb, f, p) == doctest::Approx(m_Rb * w * w).epsilon(1e-9));
            // Independent check by a second difference of the potential itself.
            double h = 1e-3 / p.k_L;
            double d2 = (lattice::potential(r, xb + h, f, p) - 2 * lattice::potential(r, xb, f, p) +
                         lattice::potential(r, xb - h, f, p)) / (h * h);
            CHECK(d2 == doctest::Approx(m_Rb * w * w).epsilon(1e-5));
        }
    }
}

TEST_CASE("potential shape")
{
    auto p = reported_lattice();
    p.phi = 0.4;
    auto f = lattice::compute_field(p, reported_budget());
    double lam = 2 * pi / p.k_L;
    for (double x: {0.0, 1e-7, 3.3e-7}) {
        for (double r: {0.0, 1e-4})
            CHECK(lattice::potential(r, x + lam / 2, f, p) == doctest::Approx(lattice::potential(r, x, f, p)));
    }
    double xb = lattice::well_bottom(f, p);
    double prev = std::abs(lattice::potential(0, xb, f, p));
    for (int i = 1; i <= 20; i++) {
        double u = std::abs(lattice::potential(i * 50e-6, xb, f, p));
        CHECK(u < prev);
        prev = u;
    }
    // The well bottom is a minimum for red detuning.
    CHECK(lattice::potential(0, xb, f, p) < lattice::potential(0, xb + 1e-8, f, p));
}

TEST_CASE("scattering rate")
{
    auto p = reported_lattice();
    auto f = lattice::compute_field(p, reported_budget());
    CHECK(f.Gamma_sc0 == doctest::Approx(39643.3).epsilon(1e-5));
    CHECK(f.Gamma_sc0 == doctest::Approx(4.0e4).epsilon(0.10));
    double maxdepth = lattice::center_scattering_rate(f, p, lattice::ScatteringReference::MaxDepth);
    CHECK(maxdepth == doctest::Approx(f.Gamma_sc0).epsilon(1e-12));

    auto p2 = p;
    p2.Delta_LA *= 2;
    auto f2 = lattice::compute_field(p2, reported_budget());
    CHECK(f2.Gamma_sc0 == doctest::Approx(f.Gamma_sc0 / 4));

    auto p0 = p;
    p0.P0 = 0;
    CHECK(lattice::compute_field(p0, reported_budget()).Gamma_sc0 == 0.0);
}

TEST_CASE("measured calibration scales as sqrt(P0/|Delta|) and inverts")
{
    auto c = baseline();
    auto &l = c.lattice;
    REQUIRE(l.calibration == TrapCalibration::Measured);
    CHECK(lattice::center_trap_frequency(l, c.budget) == doctest::Approx(2 * pi * 302e3));
    auto l2 = l;
    l2.P0 = l.P0 / 4;
    l2.Delta_LA = l.Delta_LA / 4;
    CHECK(lattice::center_trap_frequency(l2, c.budget) == doctest::Approx(2 * pi * 302e3));
    for (double target: {2 * pi * 100e3, 2 * pi * 274e3, 2 * pi * 500e3}) {
        auto l3 = l;
        l3.P0 = lattice::power_for_trap_frequency(target, l, c.budget);
        CHECK(lattice::center_trap_frequency(l3, c.budget) == doctest::Approx(target).epsilon(1e-12));
    }
    auto calc = l;
    calc.calibration = TrapCalibration::Calculated;
    calc.P0 = lattice::power_for_trap_frequency(2 * pi * 274e3, calc, c.budget);
    CHECK(lattice::center_trap_frequency(calc, c.budget) == doctest::Approx(2 * pi * 274e3).epsilon(1e-12));
}

}
