#include "symcool/coupling.hpp"

#include <cmath>

namespace symcool::coupling {

namespace {

constexpr double pi = std::numbers::pi;

// Antiderivative of Omega^2 / ((Omega - Omega_m)^2 + a^2) in Omega.
double step_antiderivative(double Omega, double Omega_m, double a)
{
    double u = Omega - Omega_m;
    return u + Omega_m * std::log(u * u + a * a) + (Omega_m * Omega_m - a * a) / a * std::atan(u / a);
}

}

double coupling_constant(double N, double Omega_a, double M, double Omega_m, double finesse, double r_m,
                         double m_atom, double g_fraction)
{
    return g_fraction * std::abs(r_m) * Omega_a * std::sqrt(N * m_atom * Omega_a / (M * Omega_m)) *
        (2 * finesse / pi);
}

double spring_constant(double N, double Omega_a, double finesse, double r_m, double m_atom, double g_fraction)
{
    return g_fraction * 2 * std::abs(r_m) * (2 * finesse / pi) * N * m_atom * Omega_a * Omega_a;
}

SympatheticRate sympathetic_rate(double g_N, double Omega_a, double Omega_m, double Gamma_a, double eta2,
                                 double t2)
{
    if (!(Gamma_a > 0))
        throw ValidationError("sympathetic_rate: Gamma_a must be positive");
    double det = Omega_a - Omega_m;
    double rate = g_N * g_N * eta2 * t2 * Gamma_a / (det * det + Gamma_a * Gamma_a / 4);
    return {rate, det * rate / Gamma_a};
}

double cooperativity(double g_N, double eta2, double t2, double Gamma_a, double Gamma_m)
{
    return 4 * g_N * g_N * eta2 * t2 / (Gamma_a * Gamma_m);
}

double zero_point_amplitude(double mass, double Omega, const PhysicalConstants &k)
{
    return std::sqrt(k.hbar / (2 * mass * Omega));
}

CouplingResult evaluate(const CouplingInputs &in, const PhysicalConstants &k)
{
    CouplingResult r;
    double m = k.m_Rb87;
    r.g_N = coupling_constant(in.N, in.Omega_a, in.M, in.Omega_m, in.finesse, in.r_m, m, in.g_fraction);
    r.K = spring_constant(in.N, in.Omega_a, in.finesse, in.r_m, m, in.g_fraction);
    auto s = sympathetic_rate(r.g_N, in.Omega_a, in.Omega_m, in.Gamma_a, in.eta2, in.t2);
    r.Gamma_sym = s.Gamma_sym;
    r.delta_Omega_m = s.delta_Omega_m;
    r.C = cooperativity(r.g_N, in.eta2, in.t2, in.Gamma_a, in.Gamma_m);
    r.x_m0 = zero_point_amplitude(in.M, in.Omega_m, k);
    r.x_a0 = zero_point_amplitude(in.N * m, in.Omega_a, k);
    return r;
}

double lattice_atom_number(double n_a, double w0, double R_a)
{
    return 2 * R_a * pi * w0 * w0 * n_a;
}

double resonant_atom_number(double n_a, double w0, double R_a, double Gamma_a, double Omega_m,
                            Warnings *warnings)
{
    if (R_a < 3 * w0)
        warn(warnings, "cloud radius is not much larger than the lattice waist");
    return pi * pi * n_a * w0 * w0 * R_a * Gamma_a / Omega_m;
}

double ensemble_rate_closed_form(double Omega_a0, double Omega_m, double Gamma_a, double g_Nr,
                                 double eta2, double t2, double Omega_lower)
{
    if (Omega_a0 <= Omega_lower)
        return 0;
    double a = Gamma_a / 2;
    double B = 2 * g_Nr * g_Nr * eta2 * t2 / (pi * Omega_m * Omega_m);
    return B * (step_antiderivative(Omega_a0, Omega_m, a) - step_antiderivative(Omega_lower, Omega_m, a));
}

double ensemble_rate_step_approx(double Omega_a0, double Omega_m, double Gamma_a, double g_Nr,
                                 double eta2, double t2)
{
    return 4 * g_Nr * g_Nr * eta2 * t2 / (Gamma_a * pi) *
        (std::atan(2 * Omega_m / Gamma_a) + std::atan(2 * (Omega_a0 - Omega_m) / Gamma_a));
}

EnsembleCouplingResult ensemble_coupling(const EnsembleInputs &in, const PhysicalConstants &k)
{
    EnsembleCouplingResult r;
    r.N_lat = lattice_atom_number(in.n_a, in.w0, in.R_a);
    r.N_r = resonant_atom_number(in.n_a, in.w0, in.R_a, in.Gamma_a, in.Omega_m);
    r.g_Nr = coupling_constant(r.N_r, in.Omega_m, in.M, in.Omega_m, in.finesse, in.r_m, k.m_Rb87,
                               in.g_fraction);
    r.step_height = 4 * r.g_Nr * r.g_Nr * in.eta2 * in.t2 / in.Gamma_a;
    double lower = in.lower == LowerLimit::Exact
        ? in.Omega_a0 * std::exp(-in.R_a * in.R_a / (in.w0 * in.w0)) : 0.0;
    r.Gamma_sym_int = ensemble_rate_closed_form(in.Omega_a0, in.Omega_m, in.Gamma_a, r.g_Nr, in.eta2, in.t2,
                                                lower);
    return r;
}

EffectiveAtoms effective_oscillator(double Gamma_sym_target, double Omega_a0, double Omega_m, double Gamma_a,
                                    double M, double finesse, double r_m, double eta2, double t2,
                                    double g_fraction, const PhysicalConstants &k)
{
    EffectiveAtoms e;
    e.Omega_a = Omega_a0 >= Omega_m ? Omega_m : Omega_a0;
    if (Gamma_sym_target <= 0 || e.Omega_a <= 0 || Gamma_a <= 0)
        return {0, e.Omega_a};
    // Gamma_sym is proportional to N, so one evaluation at N = 1 fixes the scale.
    double g1 = coupling_constant(1, e.Omega_a, M, Omega_m, finesse, r_m, k.m_Rb87, g_fraction);
    double per_atom = sympathetic_rate(g1, e.Omega_a, Omega_m, Gamma_a, eta2, t2).Gamma_sym;
    e.N = Gamma_sym_target / per_atom;
    return e;
}

GroundStateCheck ground_state_criterion(double C, double T_bath, double Omega_m, const PhysicalConstants &k)
{
    double n = k.k_B * T_bath / (k.hbar * Omega_m);
    return {n, C > n};
}

}
