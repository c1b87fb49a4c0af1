#include "symcool/optomech.hpp"
#include "symcool/cavity.hpp"

#include <cmath>

namespace symcool::optomech {

double single_photon_coupling(double G, double M, double Omega_m, const PhysicalConstants &k)
{
    return std::abs(G) * std::sqrt(k.hbar / (2 * M * Omega_m));
}

double cooling_rate(double g0, double n_bar_c, double kappa, double Delta, double Omega_m)
{
    if (!(kappa > 0))
        throw ValidationError("cooling_rate: kappa must be positive");
    double k4 = kappa * kappa / 4;
    double plus = Delta + Omega_m;
    double minus = Delta - Omega_m;
    return g0 * g0 * n_bar_c * (kappa / (k4 + plus * plus) - kappa / (k4 + minus * minus));
}

double optical_spring(double Gamma_opt, double kappa, double Omega_m, double Delta, Warnings *warnings)
{
    if (kappa < 10 * std::max(std::abs(Delta), Omega_m))
        warn(warnings, "optical spring formula assumes kappa >> |Delta|, Omega_m");
    return -kappa / (8 * Omega_m) * Gamma_opt;
}

NoiseForces noise_forces(const LaserNoiseParams &noise, double G, double n_bar_c, double Delta, double kappa,
                         const PhysicalConstants &k)
{
    double f = k.hbar * G * n_bar_c;
    double conv = 8 * Delta / (kappa * kappa);
    return {f * f * noise.S_I, f * f * conv * conv * noise.S_phidot};
}

double laser_noise_temperature(const LaserNoiseParams &noise, double G, double n_bar_c, double Delta,
                               double kappa, double M, double Gamma_m, double Omega_m,
                               const PhysicalConstants &k, Warnings *warnings)
{
    if (noise.S_phidot > 0 && !(Omega_m < std::abs(Delta) && std::abs(Delta) < 0.1 * kappa))
        warn(warnings, "frequency-noise conversion assumes Omega_m < |Delta| << kappa");
    auto s = noise_forces(noise, G, n_bar_c, Delta, kappa, k);
    return (s.S_F_int + s.S_F_freq) / (4 * M * Gamma_m * k.k_B);
}

double equilibrium_temperature(double T_bath, double Gamma_m, double Gamma_opt, double Gamma_sym)
{
    double total = Gamma_m + Gamma_opt + Gamma_sym;
    if (!(total > 0))
        throw ValidationError("equilibrium_temperature: total damping must be positive");
    return T_bath * Gamma_m / total;
}

double calibration_model(double P_tot, double alpha, double beta, double T0, double Gamma_m)
{
    return Gamma_m * (T0 + beta * P_tot * P_tot) / (Gamma_m + alpha * P_tot);
}

double absorption_heating(double P0, double absorbed_frac, double dT_abs_per_W)
{
    return dT_abs_per_W * absorbed_frac * P0;
}

double coupled_power(double P0, const CouplingBudget &budget, double P_det)
{
    return budget.eta2 * (budget.t2 * P0 + P_det);
}

bool parametric_instability(double Gamma_opt, double Delta, double Gamma_m)
{
    return Delta > 0 && std::abs(Gamma_opt) > Gamma_m;
}

OptomechResult evaluate(const ExperimentConfig &config, double P0, Warnings *warnings)
{
    auto &k = config.constants;
    auto &mem = config.membrane;
    auto op = cavity::operating_point(config);
    OptomechResult r;
    r.P_tot = coupled_power(P0, config.budget, config.noise.P_det);
    r.kappa = op.kappa;
    r.Delta = op.Delta;
    r.G = op.G;
    r.g0 = single_photon_coupling(op.G, mem.M_eff, mem.Omega_m, k);
    r.n_bar_c = cavity::intracavity_photons(r.P_tot, op.Delta, op.kappa, op.omega_c, k);
    r.Gamma_opt = cooling_rate(r.g0, r.n_bar_c, op.kappa, op.Delta, mem.Omega_m);
    r.delta_Omega_opt = optical_spring(r.Gamma_opt, op.kappa, mem.Omega_m, op.Delta, warnings);
    r.T_L = laser_noise_temperature(config.noise, op.G, r.n_bar_c, op.Delta, op.kappa, mem.M_eff, mem.Gamma_m,
                                    mem.Omega_m, k, warnings);
    r.delta_T_abs = absorption_heating(P0, mem.absorption_frac, config.noise.dT_abs_per_W);
    r.T_bath = config.protocol.bath_temperature ? *config.protocol.bath_temperature
                                                : mem.T0 + r.delta_T_abs + r.T_L;
    r.unstable = parametric_instability(r.Gamma_opt, op.Delta, mem.Gamma_m);
    r.T_opt = mem.Gamma_m + r.Gamma_opt > 0
        ? equilibrium_temperature(r.T_bath, mem.Gamma_m, r.Gamma_opt, 0) : INFINITY;
    return r;
}

}
