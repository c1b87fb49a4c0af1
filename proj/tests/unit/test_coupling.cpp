#include "doctest.h"

#include "symcool/coupling.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace symcool;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double hbar = 1.054571817e-34;
constexpr double m_Rb = 86.909 * 1.66054e-27;
const double Omega_m = 2 * pi * 274e3;

coupling::CouplingInputs reported_inputs()
{
    coupling::CouplingInputs in;
    in.N = 9.1e4;
    in.Omega_a = Omega_m;
    in.M = 140e-12;
    in.Omega_m = Omega_m;
    in.Gamma_m = 0.57;
    in.Gamma_a = 1e4;
    in.finesse = 300;
    in.r_m = 0.42;
    in.eta2 = 0.7;
    in.t2 = 0.8;
    return in;
}

// Single-atom coupling squared written out from the definition.
double g1_squared(double Omega_a, double M, double Om, double F, double r)
{
    double lever = 2 * F / pi;
    return r * r * Omega_a * Omega_a * m_Rb * Omega_a / (M * Om) * lever * lever;
}

// N_lat times the integral of Gamma_sym[N = 1, Omega]/Omega over [lo, hi].
double quadrature_oracle(double lo, double hi, double Om, double Gamma_a, double N_lat, double M, double F,
                         double r, double eta2, double t2)
{
    using boost::math::quadrature::gauss_kronrod;
    auto integrand = [&] (double W) {
        double det = W - Om;
        return g1_squared(W, M, Om, F, r) * eta2 * t2 * Gamma_a / (det * det + Gamma_a * Gamma_a / 4) / W;
    };
    // Split at the resonance so the adaptive rule sees a smooth peak edge.
    double total = 0;
    std::vector<double> cuts{lo};
    for (double c: {Om - 5 * Gamma_a, Om, Om + 5 * Gamma_a}) {
        if (c > lo && c < hi)
            cuts.push_back(c);
    }
    cuts.push_back(hi);
    for (size_t i = 0; i + 1 < cuts.size(); i++)
        total += gauss_kronrod<double, 61>::integrate(integrand, cuts[i], cuts[i + 1], 20, 1e-14);
    return N_lat * total;
}

}

TEST_SUITE("coupling") {

TEST_CASE("coupling constant at the reported operating point")
{
    auto r = coupling::evaluate(reported_inputs());
    CHECK(r.g_N == doctest::Approx(1337.503).epsilon(1e-6));
    CHECK(r.g_N == doctest::Approx(1.3e3).epsilon(0.05));
    CHECK(r.Gamma_sym == doctest::Approx(400.717).epsilon(1e-5));
    CHECK(r.Gamma_sym == doctest::Approx(390).epsilon(0.05));
    CHECK(r.C == doctest::Approx(703.012).epsilon(1e-5));
    CHECK(r.C == doctest::Approx(680).epsilon(0.05));
    CHECK(coupling::kReportedResonantAtoms == 9.1e4);
}

TEST_CASE("g_N = K x_m0 x_a0 / hbar")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.3, 3);
    for (int i = 0; i < 100; i++) {
        auto in = reported_inputs();
        in.N *= u(rng);
        in.M *= u(rng);
        in.Omega_a *= u(rng);
        in.finesse *= u(rng);
        auto r = coupling::evaluate(in);
        CHECK(r.g_N == doctest::Approx(r.K * r.x_m0 * r.x_a0 / hbar).epsilon(1e-9));
        CHECK(r.C == doctest::Approx(4 * r.g_N * r.g_N * 0.7 * 0.8 / (in.Gamma_a * in.Gamma_m)).epsilon(1e-12));
    }
}

TEST_CASE("scaling laws over random draws")
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.2, 5);
    auto g = [] (double N, double M, double F, double r) {
        return coupling::coupling_constant(N, Omega_m, M, Omega_m, F, r, m_Rb);
    };
    for (int i = 0; i < 200; i++) {
        double N = 1e5 * u(rng), M = 1e-10 * u(rng), F = 100 * u(rng), r = 0.1 * u(rng), a = u(rng);
        double g0 = g(N, M, F, r);
        CHECK(g(a * N, M, F, r) == doctest::Approx(std::sqrt(a) * g0).epsilon(1e-12));
        CHECK(g(N, a * M, F, r) == doctest::Approx(g0 / std::sqrt(a)).epsilon(1e-12));
        CHECK(g(N, M, a * F, r) == doctest::Approx(a * g0).epsilon(1e-12));
        CHECK(g(N, M, F, a * r) == doctest::Approx(a * g0).epsilon(1e-12));
    }
    CHECK(g(4 * 9.1e4, 140e-12, 300, 0.42) == doctest::Approx(2 * g(9.1e4, 140e-12, 300, 0.42)));
    CHECK(coupling::coupling_constant(9.1e4, Omega_m, 140e-12, Omega_m, 300, 0.42, m_Rb, 0.92) ==
          doctest::Approx(0.92 * g(9.1e4, 140e-12, 300, 0.42)));
}

TEST_CASE("Lorentzian sympathetic rate")
{
    double g = 1300, Ga = 1e4;
    auto on = coupling::sympathetic_rate(g, Omega_m, Omega_m, Ga, 0.7, 0.8);
    CHECK(on.Gamma_sym == doctest::Approx(4 * g * g * 0.56 / Ga));
    CHECK(on.Gamma_sym == doctest::Approx(390).epsilon(0.05));
    CHECK(on.delta_Omega_m == 0.0);
    auto half = coupling::sympathetic_rate(g, Omega_m + Ga / 2, Omega_m, Ga, 0.7, 0.8);
    CHECK(half.Gamma_sym == doctest::Approx(on.Gamma_sym / 2));
    CHECK(half.delta_Omega_m == doctest::Approx(half.Gamma_sym / 2));
    for (double d: {-3e4, -1e3, -1.0, 1.0, 1e3, 3e4})
        CHECK(coupling::sympathetic_rate(g, Omega_m + d, Omega_m, Ga, 0.7, 0.8).Gamma_sym < on.Gamma_sym);
    CHECK_THROWS_AS(coupling::sympathetic_rate(g, Omega_m, Omega_m, 0, 0.7, 0.8), ValidationError);
}

TEST_CASE("cooperativity")
{
    CHECK(coupling::cooperativity(0, 0.7, 0.8, 1e4, 0.57) == 0.0);
    double g = 1300;
    auto on = coupling::sympathetic_rate(g, Omega_m, Omega_m, 1e4, 0.7, 0.8);
    CHECK(coupling::cooperativity(g, 0.7, 0.8, 1e4, 0.57) == doctest::Approx(on.Gamma_sym / 0.57));
    CHECK(390 / 0.57 == doctest::Approx(680).epsilon(0.01));
}

TEST_CASE("spring constant and the membrane-side asymmetry")
{
    auto in = reported_inputs();
    double K = coupling::spring_constant(in.N, in.Omega_a, in.finesse, in.r_m, m_Rb);
    CHECK(K == doctest::Approx(2 * 0.42 * (600 / pi) * in.N * m_Rb * Omega_m * Omega_m));
    // Force on the atoms from a membrane displacement, and the reverse with eta^2 t^2.
    double x = 1e-12;
    double F_atoms = -K * x;
    double F_membrane = -in.eta2 * in.t2 * K * x;
    CHECK(F_membrane / F_atoms == doctest::Approx(in.eta2 * in.t2));
}

TEST_CASE("atom numbers")
{
    double N_r = coupling::resonant_atom_number(4.5e15, 284e-6, 3.5e-3, 1e4, Omega_m);
    CHECK(N_r == doctest::Approx(72826).epsilon(1e-4));
    CHECK(N_r == doctest::Approx(7.3e4).epsilon(0.01));
    CHECK(coupling::resonant_atom_number(9e15, 284e-6, 3.5e-3, 1e4, Omega_m) == doctest::Approx(2 * N_r));
    double N_lat = coupling::lattice_atom_number(4.5e15, 284e-6, 3.5e-3);
    CHECK(N_r == doctest::Approx(N_lat * pi * 1e4 / (2 * Omega_m)));
    Warnings w;
    coupling::resonant_atom_number(4.5e15, 284e-6, 0.5e-3, 1e4, Omega_m, &w);
    CHECK(w.messages.size() == 1);
}

TEST_CASE("ensemble closed form equals the quadrature oracle on a 100-point grid")
{
    double M = 140e-12, F = 300, r = 0.42, eta2 = 0.7, t2 = 0.8;
    double w0 = 284e-6, n_a = 4.5e15;
    double worst = 0;
    for (double R_a: {3.5e-3, 1.5 * 284e-6}) {
        for (int i = 0; i < 10; i++) {
            double ratio = 0.2 + 2.8 * i / 9.0;
            for (int j = 0; j < 10; j++) {
                double ga = 0.005 * std::pow(0.2 / 0.005, j / 9.0);
                coupling::EnsembleInputs in{n_a, w0, R_a, ga * Omega_m, Omega_m, ratio * Omega_m, M, F, r, eta2, t2};
                auto res = coupling::ensemble_coupling(in);
                double lo = in.Omega_a0 * std::exp(-R_a * R_a / (w0 * w0));
                double N_lat = 2 * pi * w0 * w0 * R_a * n_a;
                double oracle = quadrature_oracle(lo, in.Omega_a0, Omega_m, in.Gamma_a, N_lat, M, F, r, eta2, t2);
                double rel = std::abs(res.Gamma_sym_int - oracle) / oracle;
                worst = std::max(worst, rel);
                CAPTURE(ratio);
                CAPTURE(ga);
                CAPTURE(R_a);
                CHECK(rel < 1e-6);
            }
        }
    }
    MESSAGE("largest relative deviation from quadrature: " << worst);
}

TEST_CASE("ensemble rate: limits, plateau, step approximation")
{
    double g = 1300, Ga = 1e4;
    CHECK(coupling::ensemble_rate_closed_form(0, Omega_m, Ga, g, 0.7, 0.8) == 0.0);
    double plateau = 4 * g * g * 0.56 / Ga;
    double high = coupling::ensemble_rate_closed_form(3 * Omega_m, Omega_m, Ga, g, 0.7, 0.8);
    CHECK(high == doctest::Approx(plateau).epsilon(0.01));

    // Monotone step.
    double prev = 0;
    for (int i = 1; i <= 300; i++) {
        double v = coupling::ensemble_rate_closed_form(Omega_m * 3 * i / 300.0, Omega_m, Ga, g, 0.7, 0.8);
        CHECK(v >= prev);
        prev = v;
    }

    // Once the step has settled, a few Gamma_a above the edge.  At the edge
    // itself the dropped logarithm is about (Gamma_a/Omega_m) ln(2 Omega_m/Gamma_a),
    // a few percent of the arctan sum.
    double Ga_small = 0.01 * Omega_m;
    for (double ratio: {1.05, 1.1, 1.5, 2.0, 3.0}) {
        double full = coupling::ensemble_rate_closed_form(ratio * Omega_m, Omega_m, Ga_small, g, 0.7, 0.8);
        double approx = coupling::ensemble_rate_step_approx(ratio * Omega_m, Omega_m, Ga_small, g, 0.7, 0.8);
        CAPTURE(ratio);
        CHECK(approx == doctest::Approx(full).epsilon(0.02));
    }
    double edge = coupling::ensemble_rate_closed_form(Omega_m, Omega_m, Ga_small, g, 0.7, 0.8);
    double edge_approx = coupling::ensemble_rate_step_approx(Omega_m, Omega_m, Ga_small, g, 0.7, 0.8);
    double dropped = 0.01 * (2 * std::log(2 / 0.01) - 1) / 2 / (pi / 2);
    CHECK(edge_approx / edge - 1 == doctest::Approx(dropped).epsilon(0.1));
}

TEST_CASE("ensemble bookkeeping")
{
    coupling::EnsembleInputs in{4.5e15, 284e-6, 3.5e-3, 1e4, Omega_m, 2 * Omega_m, 140e-12, 300, 0.42, 0.7, 0.8};
    auto r = coupling::ensemble_coupling(in);
    CHECK(r.N_r == doctest::Approx(r.N_lat * pi * in.Gamma_a / (2 * Omega_m)));
    CHECK(r.step_height == doctest::Approx(4 * r.g_Nr * r.g_Nr * 0.56 / in.Gamma_a));
    auto zero = in;
    zero.lower = coupling::LowerLimit::Zero;
    // R_a >> w0 here, so the two lower limits agree.
    CHECK(coupling::ensemble_coupling(zero).Gamma_sym_int == doctest::Approx(r.Gamma_sym_int).epsilon(1e-12));
    auto near = in;
    near.R_a = 1.2 * in.w0;
    auto nz = near;
    nz.lower = coupling::LowerLimit::Zero;
    CHECK(coupling::ensemble_coupling(nz).Gamma_sym_int != doctest::Approx(coupling::ensemble_coupling(near).Gamma_sym_int));
}

TEST_CASE("effective oscillator reproduces its target rate")
{
    for (double ratio: {0.6, 0.9, 1.0, 1.7}) {
        double target = 120;
        auto e = coupling::effective_oscillator(target, ratio * Omega_m, Omega_m, 1e4, 140e-12, 300, 0.42, 0.7, 0.8);
        CHECK(e.Omega_a == doctest::Approx(std::min(ratio, 1.0) * Omega_m));
        double g = coupling::coupling_constant(e.N, e.Omega_a, 140e-12, Omega_m, 300, 0.42, m_Rb);
        CHECK(coupling::sympathetic_rate(g, e.Omega_a, Omega_m, 1e4, 0.7, 0.8).Gamma_sym ==
              doctest::Approx(target).epsilon(1e-12));
    }
    CHECK(coupling::effective_oscillator(0, Omega_m, Omega_m, 1e4, 140e-12, 300, 0.42, 0.7, 0.8).N == 0.0);
}

TEST_CASE("improved setup and ground-state criterion")
{
    double Om = 2 * pi * 1.1e6;
    double g = coupling::coupling_constant(1e5, Om, 63.5e-12, Om, 1000, 0.42, m_Rb);
    CHECK(g == doctest::Approx(27859.4).epsilon(1e-5));
    CHECK(g == doctest::Approx(2.8e4).epsilon(0.01));
    double Gm = Om / 4e7;
    double C = coupling::cooperativity(g, 0.9, 0.9, 4e4, Gm);
    CHECK(C == doctest::Approx(363845).epsilon(1e-5));
    auto gs = coupling::ground_state_criterion(C, 4, Om);
    CHECK(gs.n_bath == doctest::Approx(75769.5).epsilon(1e-5));
    CHECK(gs.satisfied);

    auto room = coupling::ground_state_criterion(680, 295, Omega_m);
    CHECK(room.n_bath == doctest::Approx(2.2434e7).epsilon(1e-4));
    CHECK_FALSE(room.satisfied);
    CHECK(coupling::ground_state_criterion(1, 0, Omega_m).satisfied);
    CHECK(coupling::kLiteratureSteadyStatePhonons == 0.75);
}

}
