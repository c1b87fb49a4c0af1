#pragma once

#include "errors.hpp"
#include "params.hpp"

namespace symcool::coupling {

// Reference values quoted with the experiment; not used in calculations.
inline constexpr double kReportedResonantAtoms = 9.1e4;
inline constexpr double kLiteratureSteadyStatePhonons = 0.75;

// g_N = |r_m| Omega_a sqrt(N m Omega_a/(M Omega_m)) (2F/pi), times the G/G_max prefactor.
double coupling_constant(double N, double Omega_a, double M, double Omega_m, double finesse, double r_m,
                         double m_atom, double g_fraction = 1);

// K = 2|r_m| (2F/pi) N m Omega_a^2, the spring constant acting on the atoms.
// The force on the membrane carries an extra eta^2 t^2.
double spring_constant(double N, double Omega_a, double finesse, double r_m, double m_atom,
                       double g_fraction = 1);

struct SympatheticRate {
    double Gamma_sym;
    double delta_Omega_m;
};

SympatheticRate sympathetic_rate(double g_N, double Omega_a, double Omega_m, double Gamma_a,
                                 double eta2, double t2);

double cooperativity(double g_N, double eta2, double t2, double Gamma_a, double Gamma_m);

double zero_point_amplitude(double mass, double Omega, const PhysicalConstants &k = PhysicalConstants::standard());

struct CouplingResult {
    double g_N;
    double K;
    double Gamma_sym;
    double delta_Omega_m;
    double C;
    double x_m0;
    double x_a0;
};

struct CouplingInputs {
    double N;
    double Omega_a;
    double M;
    double Omega_m;
    double Gamma_m;
    double Gamma_a;
    double finesse;
    double r_m;
    double eta2;
    double t2;
    double g_fraction = 1;
};

CouplingResult evaluate(const CouplingInputs &in, const PhysicalConstants &k = PhysicalConstants::standard());

double lattice_atom_number(double n_a, double w0, double R_a);
// N_r = pi^2 n_a w0^2 R_a Gamma_a / Omega_m
double resonant_atom_number(double n_a, double w0, double R_a, double Gamma_a, double Omega_m,
                            Warnings *warnings = nullptr);

// Full arctan/log form of the radially integrated rate.  `Omega_lower` is the
// trap frequency at the cloud edge; zero reproduces the wide-cloud limit.
double ensemble_rate_closed_form(double Omega_a0, double Omega_m, double Gamma_a, double g_Nr,
                                 double eta2, double t2, double Omega_lower = 0);

// Two-arctan form valid for Gamma_a << Omega_m.
double ensemble_rate_step_approx(double Omega_a0, double Omega_m, double Gamma_a, double g_Nr,
                                 double eta2, double t2);

enum class LowerLimit {
    Exact, // Omega_a(R_a) = Omega_a(0) exp(-R_a^2/w0^2)
    Zero,
};

struct EnsembleInputs {
    double n_a;
    double w0;
    double R_a;
    double Gamma_a;
    double Omega_m;
    double Omega_a0;
    double M;
    double finesse;
    double r_m;
    double eta2;
    double t2;
    double g_fraction = 1;
    LowerLimit lower = LowerLimit::Exact;
};

struct EnsembleCouplingResult {
    double N_r;
    double N_lat;
    double g_Nr;
    double Gamma_sym_int;
    double step_height;
};

EnsembleCouplingResult ensemble_coupling(const EnsembleInputs &in,
                                         const PhysicalConstants &k = PhysicalConstants::standard());

// A single collective oscillator that reproduces a given cooling rate.  It
// sits at Omega_m when the lattice centre reaches resonance, else at Omega_a0.
struct EffectiveAtoms {
    double N;
    double Omega_a;
};

EffectiveAtoms effective_oscillator(double Gamma_sym_target, double Omega_a0, double Omega_m, double Gamma_a,
                                    double M, double finesse, double r_m, double eta2, double t2,
                                    double g_fraction = 1,
                                    const PhysicalConstants &k = PhysicalConstants::standard());

struct GroundStateCheck {
    double n_bath;
    bool satisfied;
};

GroundStateCheck ground_state_criterion(double C, double T_bath, double Omega_m,
                                        const PhysicalConstants &k = PhysicalConstants::standard());

}
