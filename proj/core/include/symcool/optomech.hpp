#pragma once

#include "errors.hpp"
#include "params.hpp"

namespace symcool::optomech {

// Reference data from the optical spring measurement.
inline constexpr double kMeasuredSpringShiftPerWatt = -kTwoPi * 11e3; // rad/s per W of P_tot
inline constexpr double kOpticalSpringFraction = 0.89;

double single_photon_coupling(double G, double M, double Omega_m,
                              const PhysicalConstants &k = PhysicalConstants::standard());

// Gamma_opt = g0^2 n_c [kappa/(kappa^2/4 + (Delta+Omega_m)^2) - kappa/(kappa^2/4 + (Delta-Omega_m)^2)]
double cooling_rate(double g0, double n_bar_c, double kappa, double Delta, double Omega_m);

double optical_spring(double Gamma_opt, double kappa, double Omega_m, double Delta = 0,
                      Warnings *warnings = nullptr);

struct NoiseForces {
    double S_F_int;  // N^2/Hz
    double S_F_freq; // N^2/Hz
};

NoiseForces noise_forces(const LaserNoiseParams &noise, double G, double n_bar_c, double Delta, double kappa,
                         const PhysicalConstants &k = PhysicalConstants::standard());

double laser_noise_temperature(const LaserNoiseParams &noise, double G, double n_bar_c, double Delta,
                               double kappa, double M, double Gamma_m, double Omega_m,
                               const PhysicalConstants &k = PhysicalConstants::standard(),
                               Warnings *warnings = nullptr);

double equilibrium_temperature(double T_bath, double Gamma_m, double Gamma_opt, double Gamma_sym);

// T_opt = Gamma_m (T0 + beta P^2) / (Gamma_m + alpha P)
double calibration_model(double P_tot, double alpha, double beta, double T0, double Gamma_m);

// Bath temperature offset from absorbed light: dT_abs_per_W * absorbed_frac * P0.
double absorption_heating(double P0, double absorbed_frac, double dT_abs_per_W);

// P_tot = eta^2 (t^2 P0 + P_det)
double coupled_power(double P0, const CouplingBudget &budget, double P_det);

// Blue detuning with anti-damping stronger than the intrinsic damping.
bool parametric_instability(double Gamma_opt, double Delta, double Gamma_m);

struct OptomechResult {
    double P_tot;
    double kappa;
    double Delta;
    double G;
    double g0;
    double n_bar_c;
    double Gamma_opt;
    double delta_Omega_opt;
    double T_L;
    double delta_T_abs;
    double T_bath;   // support temperature plus absorption heating plus laser noise
    double T_opt;
    bool unstable;
};

// Cavity optomechanics at lattice power P0 for the configured operating point.
OptomechResult evaluate(const ExperimentConfig &config, double P0, Warnings *warnings = nullptr);

}
