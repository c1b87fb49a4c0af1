#pragma once

#include "errors.hpp"
#include "params.hpp"

namespace symcool::lattice {

struct LatticeField {
    double V0;         // J, single-beam dipole potential
    double V_d;        // J
    double V_m;        // J
    double Omega_a0;   // rad/s, from the calculated potential
    double Gamma_sc0;  // 1/s, at the well bottom in the centre
    double Pr_over_P0;
};

// V0 = (hbar Gamma^2 / 12 Delta_LA) I0/I_s with I0 = 2 P0/(pi w0^2).
double dipole_potential_depth(double P0, double w0, double Delta_LA,
                              const PhysicalConstants &k = PhysicalConstants::standard(),
                              Warnings *warnings = nullptr);

double reflected_power_ratio(const CouplingBudget &budget);
inline constexpr double kMeasuredReflectedPowerRatio = 0.51;

LatticeField compute_field(const LatticeParams &params, const CouplingBudget &budget,
                           const PhysicalConstants &k = PhysicalConstants::standard(),
                           Warnings *warnings = nullptr);

// U(r, x) = exp(-2r^2/w0^2) [V_d - V_m sin^2(k_L x + phi/2)]
double potential(double r, double x, const LatticeField &field, const LatticeParams &params);
// d^2U/dx^2, evaluated analytically.
double potential_curvature(double r, double x, const LatticeField &field, const LatticeParams &params);
// Axial position of the well bottom nearest x = 0.
double well_bottom(const LatticeField &field, const LatticeParams &params);

double trap_frequency(double r, const LatticeField &field, const LatticeParams &params,
                      const PhysicalConstants &k = PhysicalConstants::standard());

// Gamma_sc = Gamma U(r, x)/(hbar Delta_LA)
double scattering_rate(double r, double x, const LatticeField &field, const LatticeParams &params,
                       const PhysicalConstants &k = PhysicalConstants::standard());

enum class ScatteringReference {
    WellBottom, // potential at the trapping minimum
    MaxDepth,   // largest |U| along the standing wave
};

double center_scattering_rate(const LatticeField &field, const LatticeParams &params,
                              ScatteringReference ref,
                              const PhysicalConstants &k = PhysicalConstants::standard());

// Centre trap frequency used for dynamics: either the calculated value or the
// measured one scaled as sqrt(P0/|Delta_LA|) from its reference point.
double center_trap_frequency(const LatticeParams &params, const CouplingBudget &budget,
                             const PhysicalConstants &k = PhysicalConstants::standard());

// Inverse of center_trap_frequency in P0.
double power_for_trap_frequency(double Omega_a0, const LatticeParams &params, const CouplingBudget &budget,
                                const PhysicalConstants &k = PhysicalConstants::standard());

}
