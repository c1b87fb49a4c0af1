#include "symcool/lattice.hpp"

#include <cmath>

namespace symcool::lattice {

double dipole_potential_depth(double P0, double w0, double Delta_LA, const PhysicalConstants &k,
                              Warnings *warnings)
{
    if (Delta_LA == 0)
        throw ValidationError("dipole_potential_depth: zero atom-light detuning");
    if (std::abs(Delta_LA) < kTwoPi * 1e9)
        warn(warnings, "lattice detuning below 2 pi x 1 GHz; hyperfine structure is not negligible");
    double I0 = 2 * P0 / (std::numbers::pi * w0 * w0);
    return k.hbar * k.Gamma_D2 * k.Gamma_D2 / (12 * Delta_LA) * I0 / k.I_s;
}

double reflected_power_ratio(const CouplingBudget &budget)
{
    return budget.eta2 * budget.t2 * budget.t2;
}

LatticeField compute_field(const LatticeParams &params, const CouplingBudget &budget,
                           const PhysicalConstants &k, Warnings *warnings)
{
    LatticeField f;
    f.V0 = dipole_potential_depth(params.P0, params.w0, params.Delta_LA, k, warnings);
    double eta_t2 = std::sqrt(budget.eta2) * budget.t2;
    f.V_d = f.V0 * (1 + eta_t2) * (1 + eta_t2);
    f.V_m = 4 * eta_t2 * f.V0;
    f.Omega_a0 = std::sqrt(2 * std::abs(f.V_m) * params.k_L * params.k_L / k.m_Rb87);
    f.Gamma_sc0 = center_scattering_rate(f, params, ScatteringReference::WellBottom, k);
    f.Pr_over_P0 = reflected_power_ratio(budget);
    return f;
}

double potential(double r, double x, const LatticeField &field, const LatticeParams &params)
{
    double s = std::sin(params.k_L * x + params.phi / 2);
    return std::exp(-2 * r * r / (params.w0 * params.w0)) * (field.V_d - field.V_m * s * s);
}

double potential_curvature(double r, double x, const LatticeField &field, const LatticeParams &params)
{
    double k2 = params.k_L * params.k_L;
    return -std::exp(-2 * r * r / (params.w0 * params.w0)) * field.V_m * 2 * k2 *
        std::cos(2 * (params.k_L * x + params.phi / 2));
}

double well_bottom(const LatticeField &field, const LatticeParams &params)
{
    // Red detuning (V_m < 0) traps at the nodes of sin^2, blue at its maxima.
    double arg = field.V_m < 0 ? 0.0 : std::numbers::pi / 2;
    return (arg - params.phi / 2) / params.k_L;
}

double trap_frequency(double r, const LatticeField &field, const LatticeParams &params,
                      const PhysicalConstants &k)
{
    double centre = std::sqrt(2 * std::abs(field.V_m) * params.k_L * params.k_L / k.m_Rb87);
    return centre * std::exp(-r * r / (params.w0 * params.w0));
}

double scattering_rate(double r, double x, const LatticeField &field, const LatticeParams &params,
                       const PhysicalConstants &k)
{
    return k.Gamma_D2 * potential(r, x, field, params) / (k.hbar * params.Delta_LA);
}

double center_scattering_rate(const LatticeField &field, const LatticeParams &params,
                              ScatteringReference ref, const PhysicalConstants &k)
{
    if (ref == ScatteringReference::MaxDepth)
        return k.Gamma_D2 * std::abs(field.V_d) / (k.hbar * std::abs(params.Delta_LA));
    return scattering_rate(0, well_bottom(field, params), field, params, k);
}

double center_trap_frequency(const LatticeParams &params, const CouplingBudget &budget,
                             const PhysicalConstants &k)
{
    if (params.calibration == TrapCalibration::Measured) {
        return params.Omega_a0_measured *
            std::sqrt(params.P0 / params.P_ref * std::abs(params.Delta_ref / params.Delta_LA));
    }
    return compute_field(params, budget, k).Omega_a0;
}

double power_for_trap_frequency(double Omega_a0, const LatticeParams &params, const CouplingBudget &budget,
                                const PhysicalConstants &k)
{
    // Omega_a0 scales as sqrt(P0) in both calibrations.
    LatticeParams unit = params;
    unit.P0 = 1;
    double per_watt = center_trap_frequency(unit, budget, k);
    return Omega_a0 * Omega_a0 / (per_watt * per_watt);
}

}
